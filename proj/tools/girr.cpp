// Command line front end: scans, ratio queries, report tables, density and
// constant evaluation, and the exact-number oracle dump.
//
// Exit codes: 0 success, 2 usage or argument errors, 3 incomplete coverage
// (a query or table needs data that is not there), 4 store corruption,
// 1 anything else.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "girr/density.hpp"
#include "girr/errors.hpp"
#include "girr/exactnums.hpp"
#include "girr/scan.hpp"

namespace {

using girr::scan::Kind;

std::string env_store() {
  const char* v = std::getenv("GIRR_STORE");
  return v ? v : "";
}

Kind parse_single_kind(const std::string& text) {
  const girr::scan::KindSet set = girr::scan::parse_kinds(text);
  int count = set.b + set.e + set.g + set.q + set.w;
  if (count != 1) throw std::domain_error("expected exactly one of B, E, G, Q, W");
  if (set.b) return Kind::B;
  if (set.e) return Kind::E;
  if (set.g) return Kind::G;
  if (set.q) return Kind::Q;
  return Kind::W;
}

void print_store_info(const girr::scan::StoreInfo& info) {
  std::cout << "x_max            " << info.x_max << '\n'
            << "kinds            " << girr::scan::kinds_to_string(info.kinds) << '\n'
            << "progression      " << info.a << " mod " << info.d << '\n'
            << "chunks           " << info.chunks_committed << "/" << info.chunks_total << '\n'
            << "records          " << info.records << '\n'
            << "covered_through  " << info.covered_through << '\n'
            << "complete         " << (info.complete ? "yes" : "no") << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"irregular-prime scans, order-condition densities, and report tables"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "girr 0.1.0");

  const unsigned hw_threads = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output on stderr");
  const auto progress = [&quiet](const std::string& msg) {
    if (!quiet) std::cerr << msg << '\n';
  };

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "classify all primes up to a bound into a journal");
  girr::scan::ScanConfig scfg;
  scfg.threads = hw_threads;
  scfg.out = env_store();
  std::string scan_kinds = "BEG";
  scan_cmd->add_option("-x,--x", scfg.x_max, "scan primes p <= x")->required();
  scan_cmd->add_option("-k,--kinds", scan_kinds, "subset of BEGQW (default BEG)");
  scan_cmd->add_option("-o,--out", scfg.out,
                       "journal path (default: the GIRR_STORE environment variable)");
  scan_cmd->add_option("--d", scfg.d, "progression modulus filter (default 1: all primes)");
  scan_cmd->add_option("--a", scfg.a, "progression residue filter");
  scan_cmd->add_option("-t,--threads", scfg.threads, "worker threads");
  scan_cmd->add_flag("--resume", scfg.resume, "continue an interrupted journal");
  scan_cmd->add_option("--chunk-size", scfg.chunk_size, "commit granularity in weighted primes");
  scan_cmd->add_option("--max-chunks", scfg.max_chunks,
                       "commit at most this many chunks, then stop cleanly");
  scan_cmd->add_option("--time-budget", scfg.time_budget_seconds,
                       "seconds; warn when the projection exceeds it");
  scan_cmd->add_option("--schoolbook-threshold", scfg.schoolbook_threshold,
                       "series multiply falls back to schoolbook below this length");
  scan_cmd->callback([&]() {
    scfg.kinds = girr::scan::parse_kinds(scan_kinds);
    if (scfg.out.empty()) {
      throw std::invalid_argument("no journal path: pass --out or set GIRR_STORE");
    }
    const girr::scan::ScanSummary s = girr::scan::run_scan(scfg, progress);
    std::cout << "journal   " << s.store_path << '\n'
              << "chunks    " << s.chunks_committed << "/" << s.chunks_total << '\n'
              << "records   " << s.records << '\n'
              << "covered   " << s.covered_through << '\n'
              << "complete  " << (s.complete ? "yes" : "no") << '\n';
  });

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "summarize a journal's committed extent");
  std::string inspect_path = env_store();
  inspect_cmd->add_option("-s,--store", inspect_path, "journal path (default: GIRR_STORE)");
  inspect_cmd->callback([&]() {
    if (inspect_path.empty()) {
      throw std::invalid_argument("no journal path: pass --store or set GIRR_STORE");
    }
    print_store_info(girr::scan::inspect_store(inspect_path));
  });

  // ratio
  auto* ratio_cmd =
      app.add_subcommand("ratio", "count kind-positive primes against pi(x) in a class");
  std::string ratio_store = env_store();
  std::string ratio_kind = "G";
  girr::scan::RatioQuery query;
  unsigned ratio_decimals = 6;
  ratio_cmd->add_option("-s,--store", ratio_store, "journal path (default: GIRR_STORE)");
  ratio_cmd->add_option("-k,--kind", ratio_kind, "one of B, E, G, Q, W");
  ratio_cmd->add_option("-x,--x", query.x, "count primes p <= x")->required();
  ratio_cmd->add_option("--d", query.d, "residue class modulus (default 1)");
  ratio_cmd->add_option("--a", query.a, "residue class");
  ratio_cmd->add_option("--decimals", ratio_decimals, "digits after the point (truncated)");
  ratio_cmd->callback([&]() {
    if (ratio_store.empty()) {
      throw std::invalid_argument("no journal path: pass --store or set GIRR_STORE");
    }
    query.kind = parse_single_kind(ratio_kind);
    const girr::scan::RatioResult r = girr::scan::ratio(ratio_store, query);
    std::cout << r.matching << " / " << r.pi << " = "
              << girr::density::render_truncated(r.exact(), ratio_decimals) << '\n';
  });

  // table
  auto* table_cmd = app.add_subcommand("table", "build one of the five report tables");
  girr::scan::TableOptions topt;
  topt.threads = hw_threads;
  std::string table_kind = "B";
  bool csv = false;
  table_cmd->add_option("-n,--table", topt.table, "table number 1..5")->required();
  table_cmd->add_flag("--full", topt.full, "paper-scale bounds instead of desk-scale");
  table_cmd->add_option("-k,--kind", table_kind, "table 2 flavor: B or E");
  table_cmd->add_option("--store-dir", topt.store_dir, "directory for scan journals");
  table_cmd->add_option("-t,--threads", topt.threads, "worker threads for new scans");
  table_cmd->add_option("--max-x", topt.max_x, "largest scan the builder may launch");
  table_cmd->add_option("--digits", topt.digits, "working precision for the conjectured column");
  table_cmd->add_flag("--csv", csv, "emit CSV instead of the aligned layout");
  table_cmd->callback([&]() {
    topt.kind = parse_single_kind(table_kind);
    const girr::scan::TableResult t = girr::scan::make_table(topt, progress);
    if (csv) {
      std::cout << t.csv;
    } else {
      std::cout << t.title << "\n\n" << t.text;
    }
    for (const std::string& note : t.footnotes) std::cout << "note: " << note << '\n';
    if (!t.complete) throw girr::CoverageError("table is missing scan data (see notes)");
  });

  // density
  auto* density_cmd =
      app.add_subcommand("density", "evaluate delta(d,a) and the conjectured G ratio");
  std::uint64_t dd = 0, da = 0;
  unsigned density_digits = 31;
  density_cmd->add_option("--d", dd, "modulus")->required();
  density_cmd->add_option("--a", da, "residue, coprime to d")->required();
  density_cmd->add_option("--digits", density_digits, "decimal digits");
  density_cmd->callback([&]() {
    const girr::density::DensityResult r = girr::density::delta(dd, da, density_digits);
    std::cout << "c        " << r.c << '\n'
              << "R        " << r.r_over_a << '\n'
              << "delta    " << girr::density::render_truncated(r.delta, density_digits) << '\n'
              << "g_ratio  " << girr::density::render_truncated(r.g_ratio, density_digits)
              << '\n';
  });

  // artin
  auto* artin_cmd = app.add_subcommand("artin", "print Artin's constant");
  unsigned artin_digits = 31;
  artin_cmd->add_option("--digits", artin_digits, "decimal digits (<= 100)");
  artin_cmd->callback([&]() {
    std::cout << girr::density::render_truncated(girr::density::artin_constant(artin_digits),
                                                 artin_digits)
              << '\n';
  });

  // classify
  auto* classify_cmd =
      app.add_subcommand("classify", "full record for a single prime, as a scan would store it");
  std::uint64_t cp = 0;
  std::string classify_kinds = "BEGW";
  classify_cmd->add_option("-p,--p", cp, "odd prime")->required();
  classify_cmd->add_option("-k,--kinds", classify_kinds, "subset of BEGQW");
  classify_cmd->callback([&]() {
    const girr::scan::KindSet kinds = girr::scan::parse_kinds(classify_kinds);
    std::cout << girr::classify::to_jsonl(girr::scan::record_for_prime(cp, kinds)) << '\n';
  });

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "dump exact integer/rational sequence values");
  std::string exact_kind = "genocchi";
  unsigned exact_count = 32;
  exact_cmd->add_option("-k,--kind", exact_kind,
                        "genocchi | euler | bernoulli | euler-poly-at-zero");
  exact_cmd->add_option("-n,--n", exact_count, "largest index");
  exact_cmd->callback([&]() {
    girr::exactnums::SeqKind kind;
    if (exact_kind == "genocchi") {
      kind = girr::exactnums::SeqKind::Genocchi;
    } else if (exact_kind == "euler") {
      kind = girr::exactnums::SeqKind::Euler;
    } else if (exact_kind == "bernoulli") {
      kind = girr::exactnums::SeqKind::Bernoulli;
    } else if (exact_kind == "euler-poly-at-zero") {
      kind = girr::exactnums::SeqKind::EulerPolyAtZero;
    } else {
      throw std::domain_error("unknown sequence kind: " + exact_kind);
    }
    girr::exactnums::dump_jsonl(kind, exact_count, std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const girr::CoverageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const girr::StoreError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
