#pragma once

#include <stdexcept>

namespace girr {

// A computation would exceed a configured memory or size cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A persisted scan store does not cover the requested range/kind/filter.
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A persisted scan store failed validation (bad header, marker, or checksum).
struct StoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal cross-check failed. Indicates a bug, never bad user input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace girr
