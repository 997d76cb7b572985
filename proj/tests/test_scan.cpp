#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "girr/errors.hpp"
#include "girr/scan.hpp"

using namespace girr;
using scan::Kind;
using scan::KindSet;
using scan::RatioQuery;
using scan::ScanConfig;
using u64 = std::uint64_t;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("girr-scan-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScanConfig basic_config(const std::string& out, u64 x_max, const std::string& kinds) {
  ScanConfig cfg;
  cfg.x_max = x_max;
  cfg.kinds = scan::parse_kinds(kinds);
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST_CASE("kind-set parsing") {
  const KindSet all = scan::parse_kinds("BEGQW");
  CHECK(all.b);
  CHECK(all.e);
  CHECK(all.g);
  CHECK(all.q);
  CHECK(all.w);
  CHECK(scan::parse_kinds("begqw") == all);
  CHECK(scan::parse_kinds("WGB") == scan::parse_kinds("bgw"));
  CHECK(scan::kinds_to_string(scan::parse_kinds("WB")) == "BW");
  CHECK_FALSE(scan::parse_kinds("Q").b);
  CHECK_THROWS_AS(scan::parse_kinds(""), std::domain_error);
  CHECK_THROWS_AS(scan::parse_kinds("BX"), std::domain_error);
}

TEST_CASE("run_scan validates its configuration") {
  TempDir dir;
  auto cfg = basic_config(dir.file("s.jsonl"), 400, "B");
  SUBCASE("x_max too small") {
    cfg.x_max = 2;
    CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
  }
  SUBCASE("no kinds") {
    cfg.kinds = KindSet{};
    CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
  }
  SUBCASE("no output path") {
    cfg.out.clear();
    CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
  }
  SUBCASE("zero modulus") {
    cfg.d = 0;
    CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
  }
  SUBCASE("zero chunk size") {
    cfg.chunk_size = 0;
    CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
  }
}

TEST_CASE("a small full scan: journal shape, summary, and per-prime agreement") {
  TempDir dir;
  const auto out = dir.file("begw400.jsonl");
  const auto summary = scan::run_scan(basic_config(out, 400, "BEGW"));
  CHECK(summary.store_path == out);
  CHECK(summary.chunks_total == 1);
  CHECK(summary.chunks_committed == 1);
  CHECK(summary.records == 77);  // odd primes up to 400
  CHECK(summary.covered_through == 400);
  CHECK(summary.complete);

  // Frozen journal bytes: header, first record, trailing chunk marker. These
  // lines are the persistence contract; see docs/formats.md.
  std::ifstream in(out);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header ==
        R"({"format":"girr-scan","version":1,"x_max":400,"kinds":"BEGW","d":1,"a":0,)"
        R"("chunk_size":256,"schoolbook_threshold":64,"chunks_total":1})");
  CHECK(first ==
        R"({"p":3,"residue_mod_8":3,"ord2":2,"ord4_is_half":true,"b_irregular_indices":[],)"
        R"("e_irregular_indices":[],"g_irregular":false,"wieferich":false,)"
        R"("h_refined_residue":null})");
  std::string line, last;
  std::vector<std::string> records;
  records.push_back(first);
  while (std::getline(in, line)) {
    if (!line.empty() && line.find("\"chunk\"") == std::string::npos)
      records.push_back(line);
    last = line;
  }
  CHECK(last == R"({"chunk":0,"p_lo":3,"p_hi":397,"records":77,"fnv64":"def5e059c4a5d6f5"})");

  // Independent checksum: FNV-1a 64 over every record line, newline included.
  u64 h = 14695981039346656037ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  CHECK(records.size() == 77);
  for (const auto& rec : records) {
    mix(rec);
    mix("\n");
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  CHECK(hex.str() == "def5e059c4a5d6f5");

  // Every stored record equals the single-prime entry point.
  modarith::SpfSieve sieve(400);
  const auto kinds = scan::parse_kinds("BEGW");
  std::size_t seen = 0;
  const auto info = scan::for_each_record(out, [&](const classify::PrimeRecord& rec) {
    CHECK(rec == scan::record_for_prime(rec.p, kinds, &sieve));
    ++seen;
  });
  CHECK(seen == 77);
  CHECK(info.records == 77);
  CHECK(info.complete);

  SUBCASE("inspect_store reports the header and extent") {
    const auto st = scan::inspect_store(out);
    CHECK(st.x_max == 400);
    CHECK(st.kinds == kinds);
    CHECK(st.d == 1);
    CHECK(st.chunk_size == 256);
    CHECK(st.schoolbook_threshold == 64);
    CHECK(st.chunks_total == 1);
    CHECK(st.chunks_committed == 1);
    CHECK(st.records == 77);
    CHECK(st.covered_through == 400);
    CHECK(st.complete);
  }

  SUBCASE("existing journal without resume is refused") {
    CHECK_THROWS_AS(scan::run_scan(basic_config(out, 400, "BEGW")), std::invalid_argument);
  }

  SUBCASE("resuming a complete journal changes nothing") {
    const std::string before = slurp(out);
    auto cfg = basic_config(out, 400, "BEGW");
    cfg.resume = true;
    const auto again = scan::run_scan(cfg);
    CHECK(again.complete);
    CHECK(again.records == 77);
    CHECK(slurp(out) == before);
  }

  SUBCASE("resume with a different configuration is refused") {
    auto cfg = basic_config(out, 500, "BEGW");
    cfg.resume = true;
    CHECK_THROWS_AS(scan::run_scan(cfg), std::invalid_argument);
    auto cfg2 = basic_config(out, 400, "BE");
    cfg2.resume = true;
    CHECK_THROWS_AS(scan::run_scan(cfg2), std::invalid_argument);
  }
}

TEST_CASE("ratio queries against a scanned journal") {
  TempDir dir;
  const auto out = dir.file("begw400.jsonl");
  scan::run_scan(basic_config(out, 400, "BEGW"));

  auto count = [&](Kind kind, u64 x, u64 d = 1, u64 a = 0) {
    return scan::ratio(out, RatioQuery{kind, x, d, a});
  };

  // The twenty smallest B-irregular primes all lie below 400; the twentieth
  // E-irregular prime is 311 itself.
  CHECK(count(Kind::B, 400).matching == 20);
  CHECK(count(Kind::B, 400).pi == 78);
  CHECK(count(Kind::B, 389).matching == 20);
  CHECK(count(Kind::B, 389).pi == 77);
  CHECK(count(Kind::E, 311).matching == 20);
  CHECK(count(Kind::E, 311).pi == 64);
  CHECK(count(Kind::E, 400).matching == 25);
  CHECK(count(Kind::G, 400).matching == 43);
  CHECK(count(Kind::Q, 400).matching == 48);
  CHECK(count(Kind::W, 400).matching == 0);
  CHECK(count(Kind::B, 37).matching == 1);
  CHECK(count(Kind::B, 36).matching == 0);

  // Exact rational view of a count pair.
  const auto g = count(Kind::G, 400);
  CHECK(g.exact() == density::Rat(43, 78));

  // Progression filters; pi includes p = 2 when it fits the class.
  const auto b32 = count(Kind::B, 400, 3, 2);
  CHECK(b32.pi == 40);  // 2, 5, 11, ... : 2 = 2 mod 3 counts
  CHECK(b32.matching == 12);
  const auto q74 = count(Kind::Q, 400, 7, 4);
  CHECK(q74.pi == 12);
  CHECK(q74.matching == 7);

  // Batched queries come back in order.
  const auto batch = scan::ratios(out, {RatioQuery{Kind::B, 400}, RatioQuery{Kind::E, 311}});
  REQUIRE(batch.size() == 2);
  CHECK(batch[0].matching == 20);
  CHECK(batch[1].matching == 20);

  SUBCASE("coverage and domain errors") {
    CHECK_THROWS_AS(count(Kind::B, 500), CoverageError);
    CHECK_THROWS_AS(count(Kind::B, 1), std::domain_error);
    CHECK_THROWS_AS(count(Kind::B, 400, 0), std::domain_error);
  }
}

TEST_CASE("ratio availability depends on scanned kinds") {
  TempDir dir;
  const auto out = dir.file("b400.jsonl");
  scan::run_scan(basic_config(out, 400, "B"));
  CHECK(scan::ratio(out, {Kind::B, 400}).matching == 20);
  // Orders are always recorded, so Q membership is always answerable.
  CHECK(scan::ratio(out, {Kind::Q, 400}).matching == 48);
  CHECK_THROWS_AS(scan::ratio(out, {Kind::E, 400}), std::invalid_argument);
  CHECK_THROWS_AS(scan::ratio(out, {Kind::G, 400}), std::invalid_argument);
  CHECK_THROWS_AS(scan::ratio(out, {Kind::W, 400}), std::invalid_argument);

  // A G scan records the Wieferich flag as part of the kind's field set.
  const auto gout = dir.file("g400.jsonl");
  scan::run_scan(basic_config(gout, 400, "G"));
  CHECK(scan::ratio(gout, {Kind::G, 400}).matching == 43);
  CHECK(scan::ratio(gout, {Kind::W, 400}).matching == 0);
  CHECK_THROWS_AS(scan::ratio(gout, {Kind::B, 400}), std::invalid_argument);
}

TEST_CASE("progression-filtered scans serve only their own class") {
  TempDir dir;
  const auto out = dir.file("b41.jsonl");
  auto cfg = basic_config(out, 400, "B");
  cfg.d = 4;
  cfg.a = 1;
  const auto summary = scan::run_scan(cfg);
  CHECK(summary.records == 37);  // primes = 1 mod 4 up to 400

  const auto res = scan::ratio(out, RatioQuery{Kind::B, 400, 4, 1});
  CHECK(res.pi == 37);  // p = 2 is not 1 mod 4
  CHECK(res.matching == 9);
  CHECK_THROWS_AS(scan::ratio(out, RatioQuery{Kind::B, 400, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(scan::ratio(out, RatioQuery{Kind::B, 400, 4, 3}), std::invalid_argument);
  CHECK_THROWS_AS(scan::ratio(out, RatioQuery{Kind::B, 400, 8, 1}), std::invalid_argument);
}

TEST_CASE("the journal is byte-identical across thread counts") {
  TempDir dir;
  // chunk_size 4 keeps several chunks in the plan at this small x.
  auto cfg1 = basic_config(dir.file("t1.jsonl"), 2000, "BEGW");
  cfg1.chunk_size = 4;
  cfg1.threads = 1;
  auto cfg3 = basic_config(dir.file("t3.jsonl"), 2000, "BEGW");
  cfg3.chunk_size = 4;
  cfg3.threads = 3;
  const auto s1 = scan::run_scan(cfg1);
  const auto s3 = scan::run_scan(cfg3);
  CHECK(s1.records == s3.records);
  CHECK(s1.chunks_total == s3.chunks_total);
  CHECK(s1.chunks_total > 1);
  CHECK(slurp(dir.file("t1.jsonl")) == slurp(dir.file("t3.jsonl")));
}

TEST_CASE("an interrupted scan resumes to the identical journal") {
  TempDir dir;
  auto whole = basic_config(dir.file("whole.jsonl"), 2000, "BG");
  whole.chunk_size = 4;
  scan::run_scan(whole);

  auto partial = basic_config(dir.file("partial.jsonl"), 2000, "BG");
  partial.chunk_size = 4;
  partial.max_chunks = 2;
  const auto mid = scan::run_scan(partial);
  CHECK(mid.chunks_committed == 2);
  CHECK_FALSE(mid.complete);
  CHECK(mid.covered_through < 2000);
  const auto st = scan::inspect_store(dir.file("partial.jsonl"));
  CHECK_FALSE(st.complete);
  CHECK(st.chunks_committed == 2);

  partial.max_chunks = 0;
  partial.resume = true;
  const auto done = scan::run_scan(partial);
  CHECK(done.complete);
  CHECK(slurp(dir.file("partial.jsonl")) == slurp(dir.file("whole.jsonl")));
}

TEST_CASE("corruption is detected by the checksummed walk") {
  TempDir dir;
  const auto out = dir.file("c.jsonl");
  scan::run_scan(basic_config(out, 400, "B"));

  // Flip one digit inside a record without changing the file size.
  std::string text = slurp(out);
  const auto pos = text.find("\"ord2\":2,");
  REQUIRE(pos != std::string::npos);
  text[pos + 8] = '4';
  {
    std::ofstream rewrite(out, std::ios::binary | std::ios::trunc);
    rewrite << text;
  }
  CHECK_THROWS_AS(scan::for_each_record(out, [](const classify::PrimeRecord&) {}),
                  StoreError);

  // The sidecar index trusts an unchanged size; without it, inspection
  // re-walks the journal and sees the damage too.
  std::filesystem::remove(out + ".idx.json");
  CHECK_THROWS_AS(scan::inspect_store(out), StoreError);

  CHECK_THROWS_AS(scan::inspect_store(dir.file("missing.jsonl")), StoreError);
}

TEST_CASE("record_for_prime honors the kind field policy and short-circuits") {
  const auto all = scan::parse_kinds("BEGQW");
  const auto rec37 = scan::record_for_prime(37, all);
  CHECK(rec37.b_irregular_indices == std::vector<u64>{32});
  CHECK(rec37.g_irregular == true);
  CHECK(rec37.h_refined_residue.has_value());

  // A Q-only scan needs nothing beyond the always-present order fields.
  const auto rec_q = scan::record_for_prime(37, scan::parse_kinds("Q"));
  CHECK(rec_q.ord2 == 36);
  CHECK_FALSE(rec_q.b_irregular_indices.has_value());
  CHECK_FALSE(rec_q.g_irregular.has_value());
  CHECK_FALSE(rec_q.h_refined_residue.has_value());

  // The G short-circuit (order condition first, Bernoulli kernel only when
  // needed) must agree with the full classification.
  modarith::SpfSieve sieve(2000);
  const auto g_only = scan::parse_kinds("G");
  for (auto p : sieve.primes_in(3, 2000)) {
    const auto fast = scan::record_for_prime(p, g_only, &sieve);
    const auto slow = scan::record_for_prime(p, all, &sieve);
    CHECK(fast.g_irregular == slow.g_irregular);
    CHECK(fast.wieferich == slow.wieferich);
    CHECK(fast.ord2 == slow.ord2);
  }

  CHECK_THROWS_AS(scan::record_for_prime(4, all), std::domain_error);
  CHECK_THROWS_AS(scan::record_for_prime(2, all), std::domain_error);
}

TEST_CASE("table 1 is pure mathematics and renders the known rows") {
  TempDir dir;
  scan::TableOptions opt;
  opt.table = 1;
  opt.store_dir = dir.path.string();
  const auto result = scan::make_table(opt);
  CHECK(result.complete);
  CHECK(result.footnotes.empty());
  CHECK_FALSE(result.title.empty());
  for (const char* cell : {"0.080954", "0.989659", "0.999872", "0.060884", "0.997633",
                           "0.999990", "0.048752", "0.999422", "0.999999"}) {
    CAPTURE(cell);
    CHECK(result.text.find(cell) != std::string::npos);
    CHECK(result.csv.find(cell) != std::string::npos);
  }
}

TEST_CASE("tables that would need oversized scans degrade to footnotes") {
  TempDir dir;
  scan::TableOptions opt;
  opt.table = 3;
  opt.store_dir = dir.path.string();
  opt.max_x = 1000;  // desk-scale table 3 wants x = 10^5
  const auto result = scan::make_table(opt);
  CHECK_FALSE(result.complete);
  REQUIRE_FALSE(result.footnotes.empty());

  scan::TableOptions bad;
  bad.table = 0;
  bad.store_dir = dir.path.string();
  CHECK_THROWS_AS(scan::make_table(bad), std::invalid_argument);
  bad.table = 6;
  CHECK_THROWS_AS(scan::make_table(bad), std::invalid_argument);
}

TEST_CASE("ratio counts agree with a direct fold over the records") {
  TempDir dir;
  const auto out = dir.file("q.jsonl");
  scan::run_scan(basic_config(out, 1500, "BEG"));
  u64 q_members = 0, g_irr = 0, b_irr = 0;
  scan::for_each_record(out, [&](const classify::PrimeRecord& rec) {
    if (rec.ord4_is_half) ++q_members;
    if (rec.g_irregular.value()) ++g_irr;
    if (!rec.b_irregular_indices->empty()) ++b_irr;
  });
  CHECK(scan::ratio(out, {Kind::Q, 1500}).matching == q_members);
  CHECK(scan::ratio(out, {Kind::G, 1500}).matching == g_irr);
  CHECK(scan::ratio(out, {Kind::B, 1500}).matching == b_irr);
}
