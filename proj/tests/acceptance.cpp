// Acceptance gate: eleven criteria, one PASS/FAIL line each.
//
// Usage: girr_acceptance [work_dir]
//
// The work directory keeps scan journals between runs; criteria whose
// runtime is a hard bound always run cold, criteria whose runtime is a
// stated target reuse existing journals and report that they did. Expected
// values and tolerances are pinned in this file; a FAIL prints the measured
// value next to the expected one and the process exits nonzero.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "girr/classify.hpp"
#include "girr/density.hpp"
#include "girr/exactnums.hpp"
#include "girr/modarith.hpp"
#include "girr/modpseq.hpp"
#include "girr/scan.hpp"

using namespace girr;
using modarith::PrimeModulus;
using modarith::SpfSieve;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int number;
  std::string name;
  bool pass = true;
  double seconds = 0;
  std::string note;                 // appended to the status line
  std::vector<std::string> detail;  // printed indented under the line
};

std::vector<Criterion> g_results;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void expect(Criterion& c, bool ok, const std::string& what) {
  if (!ok) {
    c.pass = false;
    c.detail.push_back(what);
  }
}

void expect_eq(Criterion& c, const std::string& got, const std::string& want,
               const std::string& what) {
  expect(c, got == want, what + ": got " + got + ", expected " + want);
}

// Hard runtime bound: exceeding it fails the criterion.
void enforce_budget(Criterion& c, double limit_seconds) {
  if (c.seconds > limit_seconds) {
    c.pass = false;
    std::ostringstream os;
    os << "runtime " << c.seconds << " s exceeds the " << limit_seconds << " s bound";
    c.detail.push_back(os.str());
  }
}

// Six-decimal comparison with one unit of slack in the last digit, for
// values printed from independently rounded sources.
bool within_one_ulp6(const std::string& got, const std::string& want) {
  if (got == want) return true;
  if (got.size() != want.size()) return false;
  auto to_units = [](const std::string& s) -> long long {
    long long v = 0;
    for (char ch : s)
      if (ch != '.') v = v * 10 + (ch - '0');
    return v;
  };
  return std::llabs(to_units(got) - to_units(want)) <= 1;
}

u32 reduce_int(const exactnums::Int& v, u64 p) {
  exactnums::Int r = v % p;
  if (r < 0) r += p;
  return static_cast<u32>(r);
}

u32 reduce_rat(const exactnums::Rat& r, u64 p) {
  const u64 n = reduce_int(numerator(r), p);
  const u64 d = reduce_int(denominator(r), p);
  return static_cast<u32>(modarith::mul_mod(n, modarith::inv_mod(d, p), p));
}

std::string ratio6(const scan::RatioResult& r) {
  return density::render_truncated(r.exact(), 6);
}

// Runs (or resumes) a scan toward the canonical journal name and reports
// whether this call did the work or found it already done.
struct EnsureResult {
  std::string path;
  double seconds = 0;
  bool reused = false;
};

EnsureResult ensure_store(const fs::path& dir, const std::string& kinds, u64 x,
                          bool force_cold = false) {
  EnsureResult res;
  res.path = (dir / ("scan-" + kinds + "-" + std::to_string(x) + ".jsonl")).string();
  if (force_cold) {
    fs::remove(res.path);
    fs::remove(res.path + ".idx.json");
  }
  bool exists = fs::exists(res.path);
  if (exists) {
    const auto info = scan::inspect_store(res.path);
    if (info.complete) {
      res.reused = true;
      return res;
    }
  }
  scan::ScanConfig cfg;
  cfg.x_max = x;
  cfg.kinds = scan::parse_kinds(kinds);
  cfg.out = res.path;
  cfg.resume = exists;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  Timer t;
  scan::run_scan(cfg);
  res.seconds = t.seconds();
  return res;
}

// ---------------------------------------------------------------- criteria

void criterion_1(const fs::path& work) {
  Criterion c{1, "first-twenty irregular-prime lists"};
  Timer t;
  const auto out = (work / "first20.jsonl").string();
  fs::remove(out);
  fs::remove(out + ".idx.json");
  scan::ScanConfig cfg;
  cfg.x_max = 400;
  cfg.kinds = scan::parse_kinds("BEG");
  cfg.out = out;
  scan::run_scan(cfg);

  std::vector<u64> b, e, g;
  scan::for_each_record(out, [&](const classify::PrimeRecord& rec) {
    if (b.size() < 20 && !rec.b_irregular_indices->empty()) b.push_back(rec.p);
    if (e.size() < 20 && !rec.e_irregular_indices->empty()) e.push_back(rec.p);
    if (g.size() < 20 && rec.g_irregular.value()) g.push_back(rec.p);
  });
  const std::vector<u64> want_b{37,  59,  67,  101, 103, 131, 149, 157, 233, 257,
                                263, 271, 283, 293, 307, 311, 347, 353, 379, 389};
  const std::vector<u64> want_e{19,  31,  43,  47,  61,  67,  71,  79,  101, 137,
                                139, 149, 193, 223, 241, 251, 263, 277, 307, 311};
  const std::vector<u64> want_g{17,  31,  37,  41,  43,  59,  67,  73,  89,  97,
                                101, 103, 109, 113, 127, 131, 137, 149, 151, 157};
  auto join = [](const std::vector<u64>& v) {
    std::string s;
    for (u64 p : v) s += std::to_string(p) + " ";
    return s;
  };
  expect(c, b == want_b, "B list: got " + join(b));
  expect(c, e == want_e, "E list: got " + join(e));
  expect(c, g == want_g, "G list: got " + join(g));
  c.seconds = t.seconds();
  enforce_budget(c, 10);
  g_results.push_back(std::move(c));
}

void criterion_2() {
  Criterion c{2, "kernel equals the exact oracle and the Voronoi path"};
  Timer t;
  {
    SpfSieve sieve(300);
    const auto b_exact = exactnums::bernoulli_exact(297);
    const auto e_exact = exactnums::euler_exact(297);
    const auto g_exact = exactnums::genocchi_exact(297);
    for (u32 p : sieve.primes_in(5, 300)) {
      const PrimeModulus pm(p, &sieve);
      const auto bern = modpseq::bernoulli_all_mod_p(pm);
      const auto eul = modpseq::euler_all_mod_p(pm);
      const auto gen = modpseq::genocchi_all_mod_p(pm);
      for (u64 n = 0; n + 3 <= p; n += 2) {
        const bool ok = bern.at_even_index(n) == reduce_rat(b_exact[n], p) &&
                        eul.at_even_index(n) == reduce_int(e_exact[n], p) &&
                        gen.at_even_index(n) == reduce_int(g_exact[n], p);
        expect(c, ok, "slot mismatch at p=" + std::to_string(p) + " index " + std::to_string(n));
        if (!ok) break;
      }
    }
  }
  {
    SpfSieve sieve(10000);
    const auto primes = sieve.primes_in(5, 10000);
    std::mt19937 rng(20240601);
    std::map<u32, modpseq::ModSeries> cache;
    for (int i = 0; i < 1000; ++i) {
      const u32 p = primes[rng() % primes.size()];
      const PrimeModulus pm(p, &sieve);
      auto it = cache.find(p);
      if (it == cache.end()) it = cache.emplace(p, modpseq::bernoulli_all_mod_p(pm)).first;
      const u64 m = 2 * (1 + rng() % ((p - 3) / 2));
      const u32 voronoi = modpseq::bernoulli_single_mod_p(pm, m, &sieve);
      expect(c, voronoi == it->second.at_even_index(m),
             "Voronoi disagrees at p=" + std::to_string(p) + " m=" + std::to_string(m));
    }
  }
  c.seconds = t.seconds();
  enforce_budget(c, 60);
  g_results.push_back(std::move(c));
}

void criterion_3() {
  Criterion c{3, "definitional G-irregularity equals the order/Bernoulli route"};
  Timer t;
  SpfSieve sieve(20000);
  u64 checked = 0;
  for (u32 p : sieve.primes_in(3, 20000)) {
    const PrimeModulus pm(p, &sieve);
    const auto bern = modpseq::bernoulli_all_mod_p(pm);
    const auto gen = modpseq::genocchi_from_bernoulli(bern);
    const bool definitional = !gen.irregular_indices().empty();
    const bool via_theorem =
        !bern.irregular_indices().empty() || !modarith::ord4_is_half(pm);
    expect(c, definitional == via_theorem, "mismatch at p=" + std::to_string(p));
    ++checked;
  }
  c.note = "(" + std::to_string(checked) + " primes)";
  c.seconds = t.seconds();
  enforce_budget(c, 300);
  g_results.push_back(std::move(c));
}

struct DensityRow {
  u64 d, a;
  const char* experimental;  // ratio table, six decimals
  const char* theoretical;   // density table, six decimals
};

constexpr DensityRow kOrderRows[] = {
    {3, 1, "0.449049", "0.448746"},   {5, 2, "0.589614", "0.590456"},
    {4, 1, "0.374664", "0.373955"},   {20, 9, "0.395498", "0.393637"},
    {12, 11, "0.898284", "0.897493"}, {20, 19, "0.789316", "0.787275"},
    {8, 7, "0.747300", "0.747911"},   {24, 13, "0.598815", "0.598329"},
};

void criterion_4() {
  Criterion c{4, "order-density theoretical column, eight rows"};
  Timer t;
  for (const auto& row : kOrderRows) {
    const auto res = density::delta(row.d, row.a, 40);
    const std::string got = density::render_truncated(res.delta, 6);
    expect(c, within_one_ulp6(got, row.theoretical),
           "delta(" + std::to_string(row.d) + "," + std::to_string(row.a) + "): got " + got +
               ", expected " + row.theoretical);
  }
  c.seconds = t.seconds();
  enforce_budget(c, 1);
  g_results.push_back(std::move(c));
}

void criterion_5(const fs::path& work) {
  Criterion c{5, "order-density experimental column at x = 5e6"};
  Timer t;
  const auto store = ensure_store(work, "Q", 5'000'000);
  std::vector<scan::RatioQuery> queries;
  for (const auto& row : kOrderRows)
    queries.push_back({scan::Kind::Q, 5'000'000, row.d, row.a});
  const auto results = scan::ratios(store.path, queries);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& row = kOrderRows[i];
    expect_eq(c, ratio6(results[i]), row.experimental,
              "Q(" + std::to_string(row.d) + "," + std::to_string(row.a) + ")/pi at 5e6");
  }
  c.seconds = t.seconds();
  c.note = store.reused ? "(journal reused; runtime target 15 min applies to a cold scan)"
                        : "(cold scan; runtime target 15 min on 8 workers)";
  g_results.push_back(std::move(c));
}

// The subquadratic guard for criterion 6: doubling the prime must not
// quadruple the all-indices kernel time.
bool kernel_is_subquadratic(std::string& detail) {
  auto time_kernel = [](u64 p) {
    const PrimeModulus pm(p);
    double best = 1e9;
    for (int i = 0; i < 2; ++i) {
      Timer t;
      const auto series = modpseq::bernoulli_all_mod_p(pm);
      best = std::min(best, t.seconds());
      (void)series;
    }
    return best;
  };
  const double t1 = time_kernel(20011);
  const double t2 = time_kernel(40009);
  const double factor = t2 / std::max(t1, 1e-9);
  std::ostringstream os;
  os << "kernel scaling 2e4 -> 4e4: " << t1 << " s -> " << t2 << " s (factor " << factor
     << ", quadratic would be ~4)";
  detail = os.str();
  return factor < 3.0;
}

void criterion_6(const fs::path& work) {
  Criterion c{6, "G-irregular ratio at x = 1e5"};
  Timer t;
  std::string scaling;
  expect(c, kernel_is_subquadratic(scaling), "all-indices kernel looks quadratic");
  c.detail.push_back(scaling);

  const auto store = ensure_store(work, "BEGW", 100'000);
  const auto res = scan::ratio(store.path, {scan::Kind::G, 100'000});
  expect_eq(c, ratio6(res), "0.661592", "G ratio at 1e5");
  expect(c, res.pi == 9592, "pi(1e5): got " + std::to_string(res.pi) + ", expected 9592");
  c.seconds = t.seconds();
  c.note = store.reused ? "(journal reused; runtime target 30 min applies to a cold scan)"
                        : "(cold scan; runtime target 30 min)";
  g_results.push_back(std::move(c));
}

void criterion_7(const fs::path& work) {
  Criterion c{7, "irregular-ratio spot rows at x = 1e5"};
  Timer t;
  const auto store = ensure_store(work, "BEGW", 100'000);
  expect_eq(c, ratio6(scan::ratio(store.path, {scan::Kind::B, 100'000, 3, 2})), "0.394424",
            "B ratio (3,2)");
  expect_eq(c, ratio6(scan::ratio(store.path, {scan::Kind::B, 100'000, 7, 4})), "0.391005",
            "B ratio (7,4)");
  expect_eq(c, ratio6(scan::ratio(store.path, {scan::Kind::E, 100'000, 3, 2})), "0.395672",
            "E ratio (3,2)");
  c.seconds = t.seconds();
  g_results.push_back(std::move(c));
}

void criterion_8() {
  Criterion c{8, "extremal primorial progressions"};
  Timer t;
  const auto p3 = density::primorial_family(1000, 40);
  const auto p4 = density::primorial_family(10000, 40);
  expect_eq(c, density::render_truncated(p3.delta_4dn_1, 6), "0.080954", "delta(4d_n,1) n=1e3");
  expect_eq(c, density::render_truncated(p4.delta_4dn_1, 6), "0.060884", "delta(4d_n,1) n=1e4");
  expect_eq(c, density::render_truncated(p3.normalized, 6), "0.989659", "normalized n=1e3");
  expect_eq(c, density::render_truncated(p4.normalized, 6), "0.997633", "normalized n=1e4");
  expect_eq(c, density::render_truncated(p3.delta_8dn_an, 6), "0.999872",
            "delta(8d_n,a_n) n=1e3");
  c.seconds = t.seconds();
  enforce_budget(c, 10);
  g_results.push_back(std::move(c));
}

void criterion_9() {
  Criterion c{9, "Artin constant and derived limits"};
  Timer t;
  const auto a = density::artin_constant(40);
  expect_eq(c, density::render_truncated(a, 31), "0.3739558136192022880547280543464",
            "A to 31 digits");
  expect_eq(c, density::render_truncated(density::Real(1 - 3 * a / 2), 10), "0.4390662795",
            "1 - 3A/2");
  expect_eq(c, density::render_truncated(density::conjectured_g_ratio(1, 1, 40), 7),
            "0.6597765", "1 - 3A/(2 sqrt e)");
  c.seconds = t.seconds();
  enforce_budget(c, 1);
  g_results.push_back(std::move(c));
}

void criterion_10(const fs::path& work) {
  Criterion c{10, "Wieferich scan to 1e7 and the pair's classification"};
  Timer scan_timer;
  const auto store = ensure_store(work, "W", 10'000'000, /*force_cold=*/true);
  const double scan_seconds = scan_timer.seconds();

  std::vector<u64> found;
  scan::for_each_record(store.path, [&](const classify::PrimeRecord& rec) {
    if (rec.wieferich.value()) found.push_back(rec.p);
  });
  expect(c, found == std::vector<u64>{1093, 3511},
         "Wieferich set: got " + std::to_string(found.size()) + " primes");
  if (scan_seconds > 120) {
    c.pass = false;
    std::ostringstream os;
    os << "scan took " << scan_seconds << " s, bound is 120 s";
    c.detail.push_back(os.str());
  }

  const auto kinds = scan::parse_kinds("BG");
  Timer t1093;
  const auto r1093 = scan::record_for_prime(1093, kinds);
  const double s1093 = t1093.seconds();
  Timer t3511;
  const auto r3511 = scan::record_for_prime(3511, kinds);
  const double s3511 = t3511.seconds();
  expect(c, r1093.g_irregular == true, "1093 must be G-irregular");
  expect(c, r1093.b_irregular_indices->empty(), "1093 must be B-regular");
  expect(c, r3511.g_irregular == true, "3511 must be G-irregular");
  expect(c, *r3511.b_irregular_indices == std::vector<u64>{1416, 1724},
         "3511 irregular indices must be 1416 and 1724");
  expect(c, s1093 < 60 && s3511 < 60, "single-prime classification exceeded 60 s");

  std::ostringstream os;
  os << "(scan " << static_cast<int>(scan_seconds) << " s, classification "
     << s1093 + s3511 << " s)";
  c.note = os.str();
  c.seconds = scan_timer.seconds();
  g_results.push_back(std::move(c));
}

void criterion_11(const fs::path& work) {
  Criterion c{11, "property suites"};
  Timer t;

  // Refined residue vanishes exactly for G-irregular or Wieferich primes.
  {
    SpfSieve sieve(2000);
    const auto kinds = scan::parse_kinds("GW");
    for (u32 p : sieve.primes_in(5, 2000)) {
      const auto rec = scan::record_for_prime(p, kinds, &sieve);
      const bool vanished = rec.h_refined_residue.value() == 0;
      expect(c, vanished == (rec.g_irregular.value() || rec.wieferich.value()),
             "refined-residue equivalence fails at p=" + std::to_string(p));
    }
  }

  // Density sandwich on 10^4 random coprime progressions.
  {
    std::mt19937 rng(424243);
    std::uniform_int_distribution<u64> pick_d(1, 5000);
    int checked = 0;
    while (checked < 10000) {
      const u64 d = pick_d(rng);
      const u64 a = 1 + rng() % d;
      if (std::gcd(a, d) != 1) continue;
      ++checked;
      const auto fm = density::FactoredModulus::from_u64(d);
      const auto res = density::delta(fm, density::Int(a), 20);
      const density::Rat cr = res.c * res.r_over_a;
      if (res.c == 0) {
        expect(c, d % 8 == 0 && a % 8 == 1,
               "vanishing density outside the empty class at d=" + std::to_string(d) +
                   " a=" + std::to_string(a));
        continue;
      }
      const density::Rat upper = density::Rat(2) * density::g_of_d(fm) / std::gcd<u64>(2, d);
      const bool ok = density::f_of_d(fm) <= cr && cr <= upper;
      expect(c, ok, "sandwich fails at d=" + std::to_string(d) + " a=" + std::to_string(a));
    }
  }

  // No prime with ord_p(4) = (p-1)/2 is 1 mod 8, up to 10^6.
  {
    SpfSieve sieve(1'000'000);
    for (u32 p : sieve.primes_in(3, 1'000'000)) {
      const PrimeModulus pm(p, &sieve);
      const auto qc = classify::q_class(pm);
      expect(c, qc == classify::QClass::NotInQ || p % 8 != 1,
             "member with p = 1 mod 8 at p=" + std::to_string(p));
    }
  }

  // Journals are deterministic across thread counts and across resume.
  {
    auto slurp = [](const std::string& path) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    };
    const auto mk = [&](const char* name, unsigned threads, u64 max_chunks) {
      scan::ScanConfig cfg;
      cfg.x_max = 2000;
      cfg.kinds = scan::parse_kinds("BEGW");
      cfg.chunk_size = 4;  // several chunks even at this small x
      cfg.threads = threads;
      cfg.max_chunks = max_chunks;
      cfg.out = (work / name).string();
      fs::remove(cfg.out);
      fs::remove(cfg.out + ".idx.json");
      return cfg;
    };
    auto c1 = mk("det1.jsonl", 1, 0);
    auto c3 = mk("det3.jsonl", 3, 0);
    scan::run_scan(c1);
    scan::run_scan(c3);
    expect(c, slurp(c1.out) == slurp(c3.out), "journals differ across thread counts");

    auto cr = mk("resume.jsonl", 2, 2);
    scan::run_scan(cr);
    cr.max_chunks = 0;
    cr.resume = true;
    scan::run_scan(cr);
    expect(c, slurp(cr.out) == slurp(c1.out), "resumed journal differs from one-shot journal");
  }

  c.seconds = t.seconds();
  enforce_budget(c, 600);
  g_results.push_back(std::move(c));
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? argv[1] : "acceptance-work";
  fs::create_directories(work);

  criterion_1(work);
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5(work);
  criterion_6(work);
  criterion_7(work);
  criterion_8();
  criterion_9();
  criterion_10(work);
  criterion_11(work);

  int failures = 0;
  for (const auto& c : g_results) {
    std::printf("%s  %2d  %-58s %8.1fs %s\n", c.pass ? "PASS" : "FAIL", c.number,
                c.name.c_str(), c.seconds, c.note.c_str());
    for (const auto& line : c.detail) std::printf("          - %s\n", line.c_str());
    if (!c.pass) ++failures;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures == 0 ? 0 : 1;
}
