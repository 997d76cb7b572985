#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include "girr/scan.hpp"

namespace girr::scan {

namespace {

namespace fs = std::filesystem;
using u64 = std::uint64_t;

struct Class {
  u64 d;
  u64 a;
  std::string label() const { return "(" + std::to_string(d) + "," + std::to_string(a) + ")"; }
};

// Row order follows the report layout.
const std::vector<Class> kIrregularClasses = {{3, 2},  {4, 1},   {5, 4},   {7, 4},
                                              {9, 8},  {12, 5},  {15, 13}, {20, 13}};
const std::vector<Class> kOrderClasses = {{3, 1},   {5, 2},   {4, 1},  {20, 9},
                                          {12, 11}, {20, 19}, {8, 7},  {24, 13}};

bool kinds_cover(const KindSet& have, const KindSet& need) {
  if (need.b && !have.b) return false;
  if (need.e && !have.e) return false;
  if (need.g && !have.g) return false;
  if (need.w && !(have.w || have.g)) return false;
  return true;  // Q derives from fields every record carries
}

std::string canonical_store_name(const KindSet& kinds, u64 x) {
  return "scan-" + kinds_to_string(kinds) + "-" + std::to_string(x) + ".jsonl";
}

// Any journal in the directory whose kind set and committed coverage satisfy
// the need may serve; names are visited in sorted order so the choice is
// deterministic.
std::optional<std::string> find_usable(const std::string& dir, const KindSet& need, u64 x) {
  std::vector<std::string> candidates;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("scan-", 0) == 0 && name.size() > 6 &&
        name.compare(name.size() - 6, 6, ".jsonl") == 0) {
      candidates.push_back(entry.path().string());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (const std::string& path : candidates) {
    try {
      const StoreInfo info = inspect_store(path);
      if (info.d == 1 && kinds_cover(info.kinds, need) && info.covered_through >= x) {
        return path;
      }
    } catch (const StoreError&) {
      continue;  // unrelated or damaged file: not a candidate
    }
  }
  return std::nullopt;
}

std::optional<std::string> ensure_store(const TableOptions& opt, const KindSet& need, u64 x,
                                        std::vector<std::string>& footnotes,
                                        const std::function<void(const std::string&)>& log) {
  fs::create_directories(opt.store_dir);
  if (auto found = find_usable(opt.store_dir, need, x)) return found;
  if (x > opt.max_x) {
    footnotes.push_back("no journal covers kinds " + kinds_to_string(need) + " up to x = " +
                        std::to_string(x) + " and building one exceeds the --max-x cap of " +
                        std::to_string(opt.max_x));
    return std::nullopt;
  }
  ScanConfig cfg;
  cfg.x_max = x;
  cfg.kinds = need;
  cfg.threads = opt.threads;
  cfg.out = (fs::path(opt.store_dir) / canonical_store_name(need, x)).string();
  cfg.resume = true;  // pick up a partial journal of the same shape if present
  run_scan(cfg, log);
  return cfg.out;
}

// Left-aligns the first column, right-aligns the rest.
std::string render_grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << "  ";
      if (i == 0) {
        out << row[i] << std::string(width[i] - row[i].size(), ' ');
      } else {
        out << std::string(width[i] - row[i].size(), ' ') << row[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string power_of_ten_label(u64 n) {
  unsigned exponent = 0;
  u64 v = n;
  while (v % 10 == 0 && v > 1) {
    v /= 10;
    exponent += 1;
  }
  if (v == 1) return "10^" + std::to_string(exponent);
  if (v < 10 && exponent > 0) return std::to_string(v) + "*10^" + std::to_string(exponent);
  return std::to_string(n);
}

TableResult table_primorial(const TableOptions& opt) {
  TableResult res;
  res.title = "Densities along the extremal modulus family d_n, a_n";
  std::vector<u64> ns = {1'000, 10'000, 100'000};
  if (opt.full) {
    ns.push_back(1'000'000);
    ns.push_back(10'000'000);
  }

  std::vector<std::vector<std::string>> grid;
  grid.push_back({"n"});
  grid.push_back({"delta(4d_n, 1)"});
  grid.push_back({"delta(4d_n, 1) exp(gamma) loglog(4d_n)"});
  grid.push_back({"delta(8d_n, a_n)"});
  std::ostringstream csv;
  csv << "n,delta_4dn_1,normalized,delta_8dn_an\n";

  for (u64 n : ns) {
    const density::PrimorialPoint pt = density::primorial_family(n, opt.digits);
    // The last column is printed with as many digits as it takes to expose
    // the first deviation from 1 at the larger n.
    unsigned decimals = 6;
    if (n >= 1'000'000) decimals += 1;
    if (n >= 10'000'000) decimals += 1;
    grid[0].push_back(power_of_ten_label(n));
    grid[1].push_back(density::render_truncated(pt.delta_4dn_1, 6));
    grid[2].push_back(density::render_truncated(pt.normalized, 6));
    grid[3].push_back(density::render_truncated(pt.delta_8dn_an, decimals));
    csv << n << ',' << grid[1].back() << ',' << grid[2].back() << ',' << grid[3].back() << '\n';
  }
  res.text = render_grid(grid);
  res.csv = csv.str();
  return res;
}

TableResult table_irregular_classes(const TableOptions& opt,
                                    const std::function<void(const std::string&)>& log) {
  if (opt.kind != Kind::B && opt.kind != Kind::E) {
    throw std::invalid_argument("this table reports kind B or E");
  }
  const bool is_b = opt.kind == Kind::B;
  TableResult res;
  res.title = std::string(is_b ? "B" : "E") +
              "-irregular prime ratios by residue class at x = 10^5";
  const u64 x = 100'000;
  KindSet need;
  (is_b ? need.b : need.e) = true;

  const std::string theo = density::render_truncated(density::irregular_limit_ratio(opt.digits));
  const auto store = ensure_store(opt, need, x, res.footnotes, log);

  std::vector<std::string> observed(kIrregularClasses.size(), "-");
  if (store) {
    std::vector<RatioQuery> queries;
    for (const Class& c : kIrregularClasses) queries.push_back({opt.kind, x, c.d, c.a});
    const auto results = ratios(*store, queries);
    for (std::size_t i = 0; i < results.size(); ++i) {
      observed[i] = density::render_truncated(results[i].exact());
    }
  } else {
    res.complete = false;
  }

  std::vector<std::vector<std::string>> grid;
  grid.push_back({"(d,a)", "observed", "conjectured"});
  std::ostringstream csv;
  csv << "d,a,observed,conjectured\n";
  for (std::size_t i = 0; i < kIrregularClasses.size(); ++i) {
    const Class& c = kIrregularClasses[i];
    // The limit 1 - e^{-1/2} is class-independent; the text layout prints it
    // once, against the (7,4) row.
    grid.push_back({c.label(), observed[i], c.d == 7 ? theo : ""});
    csv << c.d << ',' << c.a << ',' << (observed[i] == "-" ? "" : observed[i]) << ',' << theo
        << '\n';
  }
  res.text = render_grid(grid);
  res.csv = csv.str();
  return res;
}

TableResult table_g_global(const TableOptions& opt,
                           const std::function<void(const std::string&)>& log) {
  TableResult res;
  res.title = "G-irregular prime ratio against the conjectured limit";
  std::vector<u64> xs;
  if (opt.full) {
    xs = {100'000, 1'000'000, 2'000'000, 3'000'000, 4'000'000, 5'000'000};
  } else {
    xs = {100'000};
  }
  const std::size_t theo_row = opt.full ? 2 : 0;  // against x = 2*10^6 at full scale
  const std::string theo =
      density::render_truncated(density::conjectured_g_ratio(1, 1, opt.digits));

  KindSet need;
  need.g = true;
  const auto store = ensure_store(opt, need, xs.back(), res.footnotes, log);

  std::vector<std::string> observed(xs.size(), "-");
  if (store) {
    std::vector<RatioQuery> queries;
    for (u64 x : xs) queries.push_back({Kind::G, x, 1, 0});
    const auto results = ratios(*store, queries);
    for (std::size_t i = 0; i < results.size(); ++i) {
      observed[i] = density::render_truncated(results[i].exact());
    }
  } else {
    res.complete = false;
  }

  std::vector<std::vector<std::string>> grid;
  grid.push_back({"x", "observed", "conjectured"});
  std::ostringstream csv;
  csv << "x,observed,conjectured\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    grid.push_back({power_of_ten_label(xs[i]), observed[i], i == theo_row ? theo : ""});
    csv << xs[i] << ',' << (observed[i] == "-" ? "" : observed[i]) << ',' << theo << '\n';
  }
  res.text = render_grid(grid);
  res.csv = csv.str();
  return res;
}

TableResult table_by_class(const TableOptions& opt, Kind kind,
                           const std::function<void(const std::string&)>& log) {
  TableResult res;
  u64 x = 5'000'000;
  KindSet need;
  if (kind == Kind::G) {
    res.title = "G-irregular prime ratios by residue class";
    need.g = true;
    if (!opt.full) x = 100'000;
  } else {
    res.title = "Ratios of primes with ord_p(4) = (p-1)/2 by residue class";
    need.q = true;
  }
  res.title += " at x = " + power_of_ten_label(x);

  const auto store = ensure_store(opt, need, x, res.footnotes, log);
  std::vector<std::string> observed(kOrderClasses.size(), "-");
  if (store) {
    std::vector<RatioQuery> queries;
    for (const Class& c : kOrderClasses) queries.push_back({kind, x, c.d, c.a});
    const auto results = ratios(*store, queries);
    for (std::size_t i = 0; i < results.size(); ++i) {
      observed[i] = density::render_truncated(results[i].exact());
    }
  } else {
    res.complete = false;
  }

  std::vector<std::vector<std::string>> grid;
  grid.push_back({"(d,a)", "observed", "conjectured"});
  std::ostringstream csv;
  csv << "d,a,observed,conjectured\n";
  for (std::size_t i = 0; i < kOrderClasses.size(); ++i) {
    const Class& c = kOrderClasses[i];
    const std::string theo =
        kind == Kind::G
            ? density::render_truncated(density::conjectured_g_ratio(c.d, c.a, opt.digits))
            : density::render_truncated(density::delta(c.d, c.a, opt.digits).delta);
    grid.push_back({c.label(), observed[i], theo});
    csv << c.d << ',' << c.a << ',' << (observed[i] == "-" ? "" : observed[i]) << ',' << theo
        << '\n';
  }
  res.text = render_grid(grid);
  res.csv = csv.str();
  return res;
}

}  // namespace

TableResult make_table(const TableOptions& options,
                       const std::function<void(const std::string&)>& log) {
  switch (options.table) {
    case 1: return table_primorial(options);
    case 2: return table_irregular_classes(options, log);
    case 3: return table_g_global(options, log);
    case 4: return table_by_class(options, Kind::G, log);
    case 5: return table_by_class(options, Kind::Q, log);
    default: throw std::invalid_argument("table number must be 1..5");
  }
}

}  // namespace girr::scan
