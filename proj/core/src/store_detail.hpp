#pragma once

// Journal primitives shared by the store reader and the scan writer: header
// and chunk-marker lines, FNV-1a checksums, the committed-prefix walk, and
// the sidecar index. Layout details are documented in docs/formats.md.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "girr/scan.hpp"

namespace girr::scan::detail {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(std::uint64_t h, const char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= kFnvPrime;
  }
  return h;
}

// Checksum of one journal line as stored on disk (terminator included).
inline std::uint64_t fnv_line(std::uint64_t h, const std::string& line) {
  h = fnv1a(h, line.data(), line.size());
  return fnv1a(h, "\n", 1);
}

struct Header {
  std::uint64_t x_max = 0;
  std::string kinds;
  std::uint64_t d = 1;
  std::uint64_t a = 0;
  std::uint64_t chunk_size = 0;
  std::uint64_t schoolbook_threshold = 0;
  std::uint64_t chunks_total = 0;
};

std::string header_line(const Header& h);
Header parse_header(const std::string& line);  // StoreError on foreign formats

struct Marker {
  std::uint64_t chunk = 0;
  std::uint64_t p_lo = 0;
  std::uint64_t p_hi = 0;
  std::uint64_t records = 0;
  std::uint64_t fnv = 0;
};

std::string marker_line(const Marker& m);
bool looks_like_marker(const std::string& line);
Marker parse_marker(const std::string& line);

struct JournalState {
  Header header;
  std::uint64_t chunks_committed = 0;
  std::uint64_t records = 0;
  std::uint64_t covered_through = 0;  // p_hi of the last committed chunk
  std::uint64_t bytes = 0;            // offset just past the last marker
  bool has_tail = false;              // uncommitted bytes follow
};

// Streams the journal front to back, verifying every committed chunk's record
// count and checksum against its marker. Record lines of committed chunks are
// handed to per_record (when non-null) in store order. Uncommitted trailing
// bytes are tolerated and reported via has_tail; structural damage before the
// last marker throws StoreError.
JournalState walk_journal(const std::string& path,
                          const std::function<void(const std::string&)>* per_record);

struct IndexInfo {
  std::uint64_t chunks_committed = 0;
  std::uint64_t records = 0;
  std::uint64_t covered_through = 0;
  std::uint64_t bytes = 0;
  bool complete = false;
};

std::string index_path(const std::string& store_path);
void write_index(const std::string& store_path, const IndexInfo& info);
std::optional<IndexInfo> read_index(const std::string& store_path);

KindSet kinds_from_header(const Header& h);

}  // namespace girr::scan::detail
