#pragma once

// Resumable parallel classification scans over all odd primes up to a bound,
// persisted as a line-oriented JSONL journal with checksummed chunk commits
// (see docs/formats.md), plus the ratio queries and table renderers built on
// top of the store.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "girr/classify.hpp"
#include "girr/density.hpp"

namespace girr::scan {

// What a scan computes per prime. Orders and the residue class are always
// recorded; each kind adds fields:
//   B, E: irregular index lists (Bernoulli / Euler kernel),
//   G:    G-irregularity, the refined residue h, and the Wieferich flag,
//   Q:    nothing extra (membership is derived from the always-present order),
//   W:    the Wieferich flag.
struct KindSet {
  bool b = false;
  bool e = false;
  bool g = false;
  bool q = false;
  bool w = false;

  bool any() const { return b || e || g || q || w; }
  friend bool operator==(const KindSet&, const KindSet&) = default;
};

// Parses a subset of "BEGQW" (case-insensitive, any order, no repeats
// required); throws std::domain_error on other characters or empty input.
KindSet parse_kinds(const std::string& text);
std::string kinds_to_string(const KindSet& kinds);  // canonical BEGQW order

struct ScanConfig {
  std::uint64_t x_max = 0;  // scan primes p <= x_max; must be >= 3
  KindSet kinds;
  // Optional progression filter: keep only p = a mod d. d = 1 keeps all.
  std::uint64_t d = 1;
  std::uint64_t a = 0;
  unsigned threads = 1;
  std::string out;     // journal path
  bool resume = false; // continue an interrupted journal instead of failing
  // Work per chunk is balanced by a per-prime weight; a chunk holds roughly
  // chunk_size primes' worth of weight at the 10^4 scale.
  std::uint64_t chunk_size = 256;
  std::uint64_t max_chunks = 0;        // commit at most this many, then stop (0 = all)
  double time_budget_seconds = 0;      // warn (once) if the projection exceeds it
  std::size_t schoolbook_threshold = 64;
};

struct ScanSummary {
  std::string store_path;
  std::uint64_t chunks_total = 0;
  std::uint64_t chunks_committed = 0;  // overall, including prior runs
  std::uint64_t records = 0;           // overall
  std::uint64_t covered_through = 0;   // every prime <= this has a record
  bool complete = false;
};

// Runs (or resumes) a scan. Workers classify chunks independently; a single
// ordered committer appends them, so the finished journal is byte-identical
// for every thread count. Throws std::invalid_argument for config problems
// (including resume-config mismatch), StoreError for journal corruption.
ScanSummary run_scan(const ScanConfig& config,
                     const std::function<void(const std::string&)>& log = {});

// One prime's record exactly as a scan with these kinds would store it (same
// field policy, same short-circuits). The sieve, when given, must cover p.
classify::PrimeRecord record_for_prime(std::uint64_t p, const KindSet& kinds,
                                       const modarith::SpfSieve* sieve = nullptr,
                                       std::size_t schoolbook_threshold = 64);

struct StoreInfo {
  std::uint64_t x_max = 0;
  KindSet kinds;
  std::uint64_t d = 1;
  std::uint64_t a = 0;
  std::uint64_t chunk_size = 0;
  std::size_t schoolbook_threshold = 0;
  std::uint64_t chunks_total = 0;
  std::uint64_t chunks_committed = 0;
  std::uint64_t records = 0;
  std::uint64_t covered_through = 0;
  bool complete = false;
};

// Reads the header and the committed extent. Uses the sidecar index when it
// is consistent with the journal; otherwise falls back to a full checksummed
// pass. Throws StoreError on corruption.
StoreInfo inspect_store(const std::string& path);

// Streams every committed record in ascending prime order through fn,
// validating chunk checksums along the way.
StoreInfo for_each_record(const std::string& path,
                          const std::function<void(const classify::PrimeRecord&)>& fn);

enum class Kind { B, E, G, Q, W };

struct RatioQuery {
  Kind kind = Kind::B;
  std::uint64_t x = 0;
  std::uint64_t d = 1;
  std::uint64_t a = 0;  // ignored when d = 1
};

struct RatioResult {
  RatioQuery query;
  std::uint64_t matching = 0;  // kind-positive primes <= x in the class
  std::uint64_t pi = 0;        // all primes <= x in the class (2 included)

  density::Rat exact() const { return {matching, pi}; }
};

// Counts kind-positive primes against the full prime count pi(x; d, a).
// Throws CoverageError (naming the covered bound) when the store does not
// reach x, std::invalid_argument when it lacks the kind's fields or was
// scanned with an incompatible progression filter.
std::vector<RatioResult> ratios(const std::string& store_path,
                                const std::vector<RatioQuery>& queries);
RatioResult ratio(const std::string& store_path, const RatioQuery& query);

struct TableOptions {
  int table = 0;            // 1..5
  bool full = false;        // paper-scale bounds instead of desk-scale
  Kind kind = Kind::B;      // table 2 only: B or E
  std::string store_dir = ".";
  unsigned threads = 1;
  // Largest scan the table builder may launch; larger needs are reported as
  // footnotes instead. Existing complete stores are used regardless.
  std::uint64_t max_x = 5'000'000;
  unsigned digits = 40;
};

struct TableResult {
  std::string title;
  std::string text;  // aligned plain-text table
  std::string csv;   // same data, one row per line
  std::vector<std::string> footnotes;
  bool complete = true;  // false when footnotes name missing data
};

// Builds one of the five report tables, launching or resuming scans in
// store_dir as needed (stores are named scan-<kinds>-<x>.jsonl and reused
// whenever kinds and coverage suffice).
TableResult make_table(const TableOptions& options,
                       const std::function<void(const std::string&)>& log = {});

}  // namespace girr::scan
