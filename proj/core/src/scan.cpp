#include "girr/scan.hpp"

#include <atomic>
#include <bit>
#include <cctype>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "girr/errors.hpp"
#include "store_detail.hpp"

namespace girr::scan {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct Chunk {
  std::size_t first = 0;  // index into the scanned prime list
  std::size_t count = 0;
  u64 p_lo = 0;
  u64 p_hi = 0;
  double weight = 0;
};

// Kernel cost grows like p log p; chunks hold equal weight so commits stay
// evenly spaced in wall time across the whole range. Order-only scans use a
// flat prime count instead.
double prime_weight(u64 p) { return static_cast<double>(p) * std::bit_width(p); }

std::vector<Chunk> plan_chunks(const std::vector<u32>& ps, const ScanConfig& cfg) {
  std::vector<Chunk> plan;
  if (ps.empty()) return plan;
  const bool kernel = cfg.kinds.b || cfg.kinds.e || cfg.kinds.g;
  const double budget =
      kernel ? prime_weight(10'000) * static_cast<double>(cfg.chunk_size) : 0;
  Chunk cur;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (cur.count == 0) {
      cur.first = i;
      cur.p_lo = ps[i];
    }
    cur.count += 1;
    cur.p_hi = ps[i];
    cur.weight += prime_weight(ps[i]);
    const bool cut = kernel ? cur.weight >= budget : cur.count >= cfg.chunk_size;
    if (cut) {
      plan.push_back(cur);
      cur = Chunk{};
    }
  }
  if (cur.count > 0) plan.push_back(cur);
  return plan;
}

classify::PrimeRecord make_record(u64 p, const modarith::SpfSieve* sieve, const KindSet& kinds,
                                  const modpseq::KernelConfig& kcfg) {
  const modarith::PrimeModulus pm(p, sieve);
  const bool want_w = kinds.w || kinds.g;

  // G-irregularity short-circuit: a failed order condition decides the flag
  // and forces h = 0 without any series work.
  const bool g_short = kinds.g && !modarith::ord4_is_half(pm);
  const bool need_bernoulli = kinds.b || (kinds.g && !g_short);

  std::optional<modpseq::ModSeries> bern, eul, gen;
  if (need_bernoulli) bern = modpseq::bernoulli_all_mod_p(pm, kcfg);
  if (kinds.e) eul = modpseq::euler_all_mod_p(pm, kcfg);
  if (kinds.g && !g_short) gen = modpseq::genocchi_from_bernoulli(*bern);

  classify::PrimeRecord rec = classify::classify_prime(
      pm, kinds.b ? &*bern : nullptr, kinds.e ? &*eul : nullptr, gen ? &*gen : nullptr, want_w,
      /*want_h_residue=*/gen.has_value() && p >= 5);

  if (kinds.g) {
    if (g_short && p >= 5) rec.h_refined_residue = 0;
  } else {
    // classify_prime derives the G flag from the order condition whenever it
    // can; scans keep only the fields their kind set asked for, so records
    // have a uniform shape.
    rec.g_irregular.reset();
    rec.h_refined_residue.reset();
  }
  return rec;
}

struct Payload {
  std::string bytes;  // record lines, each terminated
  detail::Marker marker;
};

Payload build_payload(const std::vector<u32>& ps, const Chunk& chunk, u64 chunk_id,
                      const modarith::SpfSieve& sieve, const KindSet& kinds,
                      const modpseq::KernelConfig& kcfg) {
  Payload out;
  out.marker.chunk = chunk_id;
  out.marker.p_lo = chunk.p_lo;
  out.marker.p_hi = chunk.p_hi;
  out.marker.records = chunk.count;
  u64 fnv = detail::kFnvOffset;
  for (std::size_t i = 0; i < chunk.count; ++i) {
    const std::string line =
        classify::to_jsonl(make_record(ps[chunk.first + i], &sieve, kinds, kcfg));
    fnv = detail::fnv_line(fnv, line);
    out.bytes += line;
    out.bytes += '\n';
  }
  out.marker.fnv = fnv;
  return out;
}

}  // namespace

KindSet parse_kinds(const std::string& text) {
  if (text.empty()) throw std::domain_error("kind set must not be empty");
  KindSet k;
  for (char c : text) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'B': k.b = true; break;
      case 'E': k.e = true; break;
      case 'G': k.g = true; break;
      case 'Q': k.q = true; break;
      case 'W': k.w = true; break;
      default:
        throw std::domain_error(std::string("unknown kind character: ") + c);
    }
  }
  return k;
}

std::string kinds_to_string(const KindSet& kinds) {
  std::string s;
  if (kinds.b) s += 'B';
  if (kinds.e) s += 'E';
  if (kinds.g) s += 'G';
  if (kinds.q) s += 'Q';
  if (kinds.w) s += 'W';
  return s;
}

classify::PrimeRecord record_for_prime(std::uint64_t p, const KindSet& kinds,
                                       const modarith::SpfSieve* sieve,
                                       std::size_t schoolbook_threshold) {
  if (!kinds.any()) throw std::domain_error("record needs a nonempty kind set");
  const modpseq::KernelConfig kcfg{{schoolbook_threshold}};
  return make_record(p, sieve, kinds, kcfg);
}

ScanSummary run_scan(const ScanConfig& config,
                     const std::function<void(const std::string&)>& log) {
  if (config.x_max < 3) throw std::invalid_argument("scan needs x_max >= 3");
  if (config.x_max > 0x7fffffffull) {
    throw std::invalid_argument("scan bound caps at 2^31 - 1");
  }
  if (!config.kinds.any()) throw std::invalid_argument("scan needs a nonempty kind set");
  if (config.out.empty()) throw std::invalid_argument("scan needs an output path");
  if (config.d == 0) throw std::invalid_argument("progression modulus must be positive");
  if (config.chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const auto say = [&](const std::string& msg) {
    if (log) log(msg);
  };

  const modarith::SpfSieve sieve(static_cast<u32>(config.x_max));
  std::vector<u32> ps = sieve.primes_in(3, static_cast<u32>(config.x_max));
  const u64 a_norm = config.d == 1 ? 0 : config.a % config.d;
  if (config.d > 1) {
    std::erase_if(ps, [&](u32 p) { return p % config.d != a_norm; });
  }
  const std::vector<Chunk> plan = plan_chunks(ps, config);

  detail::Header header;
  header.x_max = config.x_max;
  header.kinds = kinds_to_string(config.kinds);
  header.d = config.d;
  header.a = a_norm;
  header.chunk_size = config.chunk_size;
  header.schoolbook_threshold = config.schoolbook_threshold;
  header.chunks_total = plan.size();

  u64 start_chunk = 0;
  u64 records_total = 0;
  u64 covered = 0;
  u64 bytes_written = 0;
  std::ofstream out;

  if (std::filesystem::exists(config.out)) {
    if (!config.resume) {
      throw std::invalid_argument("journal already exists (pass resume to continue): " +
                                  config.out);
    }
    const detail::JournalState st = detail::walk_journal(config.out, nullptr);
    const detail::Header& h = st.header;
    if (h.x_max != header.x_max || h.kinds != header.kinds || h.d != header.d ||
        h.a != header.a || h.chunk_size != header.chunk_size ||
        h.schoolbook_threshold != header.schoolbook_threshold) {
      throw std::invalid_argument("resume configuration differs from the journal header: " +
                                  config.out);
    }
    if (h.chunks_total != header.chunks_total) {
      throw StoreError("journal chunk plan disagrees with its configuration");
    }
    start_chunk = st.chunks_committed;
    records_total = st.records;
    covered = st.covered_through;
    bytes_written = st.bytes;
    if (std::filesystem::file_size(config.out) > st.bytes) {
      std::filesystem::resize_file(config.out, st.bytes);
      say("dropped an uncommitted tail after chunk " + std::to_string(start_chunk));
    }
    if (start_chunk == plan.size()) {
      detail::write_index(config.out,
                          {start_chunk, records_total, config.x_max, bytes_written, true});
      return {config.out, plan.size(), start_chunk, records_total, config.x_max, true};
    }
    out.open(config.out, std::ios::binary | std::ios::app);
    say("resuming at chunk " + std::to_string(start_chunk) + "/" + std::to_string(plan.size()));
  } else {
    out.open(config.out, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot create journal: " + config.out);
    const std::string hl = detail::header_line(header);
    out << hl << '\n';
    out.flush();
    if (!out) throw StoreError("cannot write journal: " + config.out);
    bytes_written = hl.size() + 1;
  }
  if (!out) throw StoreError("cannot open journal for append: " + config.out);

  const u64 issue_end = config.max_chunks == 0
                            ? plan.size()
                            : std::min<u64>(plan.size(), start_chunk + config.max_chunks);
  double weight_remaining = 0;
  for (u64 i = start_chunk; i < plan.size(); ++i) weight_remaining += plan[i].weight;

  say("scan of " + std::to_string(ps.size()) + " primes in " + std::to_string(plan.size()) +
      " chunks (kinds " + header.kinds + ", x <= " + std::to_string(config.x_max) + ")");

  const modpseq::KernelConfig kcfg{{config.schoolbook_threshold}};
  std::atomic<u64> next{start_chunk};
  std::atomic<bool> abort{false};
  std::mutex mu;
  std::map<u64, Payload> done;
  u64 commit_head = start_chunk;
  bool warned = false;
  std::exception_ptr error;
  const u64 log_step = std::max<u64>(1, plan.size() / 20);

  auto worker = [&]() {
    for (;;) {
      if (abort.load(std::memory_order_relaxed)) return;
      const u64 i = next.fetch_add(1);
      if (i >= issue_end) return;
      try {
        Payload payload = build_payload(ps, plan[i], i, sieve, config.kinds, kcfg);
        std::lock_guard<std::mutex> lock(mu);
        done.emplace(i, std::move(payload));
        while (!done.empty() && done.begin()->first == commit_head) {
          Payload& head = done.begin()->second;
          const std::string ml = detail::marker_line(head.marker);
          out << head.bytes << ml << '\n';
          out.flush();
          if (!out) throw StoreError("journal write failed: " + config.out);
          bytes_written += head.bytes.size() + ml.size() + 1;
          records_total += head.marker.records;
          covered = head.marker.p_hi;
          commit_head += 1;
          const bool complete = commit_head == plan.size();
          detail::write_index(config.out, {commit_head, records_total,
                                           complete ? config.x_max : covered, bytes_written,
                                           complete});
          done.erase(done.begin());
          if (log && commit_head % log_step == 0) {
            log("committed chunk " + std::to_string(commit_head) + "/" +
                std::to_string(plan.size()) + " (primes <= " + std::to_string(covered) + ")");
          }
          if (!warned && config.time_budget_seconds > 0) {
            warned = true;
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double projected =
                elapsed / plan[start_chunk].weight * weight_remaining;
            if (projected > config.time_budget_seconds && log) {
              std::ostringstream msg;
              msg << "projected runtime " << static_cast<u64>(projected)
                  << "s exceeds the budget of " << static_cast<u64>(config.time_budget_seconds)
                  << "s";
              log(msg.str());
            }
          }
        }
      } catch (...) {
        abort.store(true);
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  const unsigned n_threads = std::max(1u, config.threads);
  const u64 n_jobs = issue_end - start_chunk;
  std::vector<std::thread> pool;
  const unsigned spawn = static_cast<unsigned>(
      std::min<u64>(n_threads, std::max<u64>(n_jobs, 1)));
  pool.reserve(spawn);
  for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  ScanSummary summary;
  summary.store_path = config.out;
  summary.chunks_total = plan.size();
  summary.chunks_committed = commit_head;
  summary.records = records_total;
  summary.complete = commit_head == plan.size();
  summary.covered_through = summary.complete ? config.x_max : covered;
  return summary;
}

namespace {

bool kind_available(const KindSet& have, Kind kind) {
  switch (kind) {
    case Kind::B: return have.b;
    case Kind::E: return have.e;
    case Kind::G: return have.g;
    case Kind::W: return have.w || have.g;
    case Kind::Q: return true;  // derived from the always-present order fields
  }
  return false;
}

bool kind_positive(const classify::PrimeRecord& rec, Kind kind) {
  const auto require = [&](bool present) {
    if (!present) {
      throw StoreError("record for p = " + std::to_string(rec.p) +
                       " lacks a field its journal header promises");
    }
  };
  switch (kind) {
    case Kind::B:
      require(rec.b_irregular_indices.has_value());
      return !rec.b_irregular_indices->empty();
    case Kind::E:
      require(rec.e_irregular_indices.has_value());
      return !rec.e_irregular_indices->empty();
    case Kind::G:
      require(rec.g_irregular.has_value());
      return *rec.g_irregular;
    case Kind::W:
      require(rec.wieferich.has_value());
      return *rec.wieferich;
    case Kind::Q:
      return rec.ord4_is_half;
  }
  return false;
}

}  // namespace

std::vector<RatioResult> ratios(const std::string& store_path,
                                const std::vector<RatioQuery>& queries) {
  std::vector<RatioResult> res;
  if (queries.empty()) return res;
  const StoreInfo info = inspect_store(store_path);
  u64 max_x = 0;
  for (const RatioQuery& q : queries) {
    if (q.x < 2) throw std::domain_error("ratio needs x >= 2");
    if (q.d == 0) throw std::domain_error("ratio modulus must be positive");
    if (!kind_available(info.kinds, q.kind)) {
      throw std::invalid_argument("journal was scanned without the fields this kind needs");
    }
    if (!(info.d == 1 || (info.d == q.d && info.a == q.a % q.d))) {
      throw std::invalid_argument("journal was scanned with an incompatible progression filter");
    }
    if (q.x > info.covered_through) {
      throw CoverageError("journal covers primes up to " +
                          std::to_string(info.covered_through) + ", the query needs " +
                          std::to_string(q.x));
    }
    max_x = std::max(max_x, q.x);
    RatioResult r;
    r.query = q;
    r.query.a = q.d == 1 ? 0 : q.a % q.d;
    res.push_back(r);
  }

  const modarith::SpfSieve sieve(static_cast<u32>(max_x));
  for (u32 p : sieve.primes()) {
    for (RatioResult& r : res) {
      if (p <= r.query.x && p % r.query.d == r.query.a) r.pi += 1;
    }
  }

  for_each_record(store_path, [&](const classify::PrimeRecord& rec) {
    for (RatioResult& r : res) {
      if (rec.p <= r.query.x && rec.p % r.query.d == r.query.a &&
          kind_positive(rec, r.query.kind)) {
        r.matching += 1;
      }
    }
  });
  return res;
}

RatioResult ratio(const std::string& store_path, const RatioQuery& query) {
  return ratios(store_path, {query}).front();
}

}  // namespace girr::scan
