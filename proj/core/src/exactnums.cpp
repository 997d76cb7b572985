#include "girr/exactnums.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

#include "girr/errors.hpp"

namespace girr::exactnums {

namespace {

// Pascal row helper: row[k] = C(n,k), advanced in place from row n to n+1.
// Reused across recurrence steps so no factorial bignums are ever formed.
class PascalRow {
 public:
  PascalRow() : row_{1}, n_(0) {}

  void advance_to(unsigned n) {
    while (n_ < n) {
      row_.push_back(0);
      for (std::size_t k = row_.size() - 1; k > 0; --k) row_[k] += row_[k - 1];
      ++n_;
    }
  }

  const Int& choose(unsigned k) const { return row_[k]; }

 private:
  std::vector<Int> row_;
  unsigned n_;
};

}  // namespace

std::vector<Int> genocchi_exact(unsigned n_max) {
  std::vector<Int> g(n_max + 1);
  g[0] = 0;
  if (n_max >= 1) g[1] = 1;
  PascalRow pascal;
  for (unsigned n = 2; n <= n_max; ++n) {
    pascal.advance_to(n);
    Int sum = 0;
    for (unsigned k = 1; k < n; ++k) sum += pascal.choose(k) * g[k];
    // 2*G_n = -sum; the sum is always even, checked to catch recurrence bugs.
    if (sum % 2 != 0) throw InternalError("genocchi_exact: odd recurrence sum");
    g[n] = -sum / 2;
  }
  return g;
}

std::vector<Int> euler_exact(unsigned n_max) {
  std::vector<Int> e(n_max + 1, Int(0));
  e[0] = 1;
  PascalRow pascal;
  for (unsigned n = 2; n <= n_max; n += 2) {
    pascal.advance_to(n);
    Int sum = 0;
    for (unsigned k = 0; k < n; k += 2) sum += pascal.choose(k) * e[k];
    e[n] = -sum;
  }
  return e;
}

std::vector<Rat> bernoulli_exact(unsigned n_max) {
  std::vector<Rat> b(n_max + 1, Rat(0));
  b[0] = 1;
  PascalRow pascal;
  for (unsigned m = 1; m <= n_max; ++m) {
    pascal.advance_to(m + 1);
    Rat sum = 0;
    for (unsigned k = 0; k < m; ++k) {
      if (k > 1 && k % 2 == 1) continue;  // odd Bernoulli numbers > 1 vanish
      sum += Rat(pascal.choose(k)) * b[k];
    }
    b[m] = -sum / (m + 1);
  }
  return b;
}

std::vector<Rat> euler_poly_at_zero_exact(unsigned n_max) {
  std::vector<Rat> v(n_max + 1, Rat(0));
  v[0] = 1;
  PascalRow pascal;
  for (unsigned n = 1; n <= n_max; ++n) {
    pascal.advance_to(n);
    Rat sum = 0;
    for (unsigned k = 0; k < n; ++k) sum += Rat(pascal.choose(k)) * v[k];
    v[n] = -sum / 2;
  }
  return v;
}

Rat euler_poly_at_zero(unsigned n) { return euler_poly_at_zero_exact(n)[n]; }

void dump_jsonl(SeqKind kind, unsigned n_max, std::ostream& out) {
  const char* name = nullptr;
  std::vector<std::string> values;
  auto rat_str = [](const Rat& r) {
    std::string s = boost::multiprecision::numerator(r).str();
    if (boost::multiprecision::denominator(r) != 1)
      s += "/" + boost::multiprecision::denominator(r).str();
    return s;
  };
  switch (kind) {
    case SeqKind::Genocchi: {
      name = "genocchi";
      for (const auto& x : genocchi_exact(n_max)) values.push_back(x.str());
      break;
    }
    case SeqKind::Euler: {
      name = "euler";
      for (const auto& x : euler_exact(n_max)) values.push_back(x.str());
      break;
    }
    case SeqKind::Bernoulli: {
      name = "bernoulli";
      for (const auto& x : bernoulli_exact(n_max)) values.push_back(rat_str(x));
      break;
    }
    case SeqKind::EulerPolyAtZero: {
      name = "euler_poly_at_zero";
      for (const auto& x : euler_poly_at_zero_exact(n_max)) values.push_back(rat_str(x));
      break;
    }
  }
  for (unsigned n = 0; n < values.size(); ++n) {
    nlohmann::ordered_json line;
    line["kind"] = name;
    line["n"] = n;
    line["value"] = values[n];
    out << line.dump() << '\n';
  }
}

}  // namespace girr::exactnums
