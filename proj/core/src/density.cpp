#include "girr/density.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <mpfr.h>

#include "girr/errors.hpp"

namespace girr::density {

namespace {

// Scoped override of the default mpfr_float precision (decimal digits).
// Every Real created inside the scope, including expression temporaries,
// carries this precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10)
      : saved_(Real::default_precision()) {
    Real::default_precision(digits10);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

void check_digits(unsigned digits, unsigned cap) {
  if (digits == 0 || digits > cap) {
    throw std::domain_error("precision out of range: " +
                            std::to_string(digits));
  }
}

// Moebius function on 1..n by factored sieve.
std::vector<int> moebius_upto(std::uint64_t n) {
  std::vector<int> mu(n + 1, 1);
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::uint64_t q : primes) {
      if (i * q > n) break;
      composite[i * q] = true;
      if (i % q == 0) {
        mu[i * q] = 0;
        break;
      }
      mu[i * q] = -mu[i];
    }
  }
  return mu;
}

// P(s) = sum over primes of p^{-s}, for integer s >= 2, via
// P(s) = sum_{n>=1} mu(n)/n * log zeta(ns), truncated once ns exceeds
// max_bits (the dropped tail is below 2^{1-max_bits}).
Real prime_zeta(unsigned s, unsigned max_bits, const std::vector<int>& mu) {
  Real acc = 0;
  for (std::uint64_t n = 1; n * s <= max_bits; ++n) {
    if (mu[n] == 0) continue;
    Real z = 0;
    mpfr_zeta_ui(z.backend().data(), static_cast<unsigned long>(n * s),
                 MPFR_RNDN);
    Real term = log(z) / Real(n);
    if (mu[n] > 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  return acc;
}

const std::uint64_t kDirectPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                       23, 29, 31, 37, 41, 43, 47};

// log A = sum_{p <= 47} log(1 - 1/(p(p-1))) - sum_{k>=2} c_k P_{>47}(k)
// where c_k = sum_{m=1}^{floor(k/2)} binom(k-m-1, k-2m)/m collects the
// p^{-k} coefficient of -log(1 - 1/(p(p-1))). The tail terms shrink like
// (phi/53)^k, so a few dozen k suffice for 100 digits.
Real artin_uncached(unsigned digits) {
  const unsigned wd = digits + 20;
  PrecisionGuard guard(wd);
  const unsigned max_bits = static_cast<unsigned>(wd * 3.33) + 20;
  const std::vector<int> mu = moebius_upto(max_bits / 2 + 1);

  Real log_a = 0;
  for (std::uint64_t p : kDirectPrimes) {
    const std::uint64_t m = p * (p - 1);
    log_a += log(Real(Rat(m - 1, m)));
  }

  const Real eps = pow(Real(10), -static_cast<int>(digits + 12));
  for (unsigned k = 2;; ++k) {
    if (k > 4000) throw InternalError("artin series failed to converge");
    Rat ck = 0;
    for (unsigned m = 1; 2 * m <= k; ++m) {
      Int b;
      mpz_bin_uiui(b.backend().data(), k - m - 1, k - 2 * m);
      ck += Rat(b, m);
    }
    Real p_tail = prime_zeta(k, max_bits, mu);
    for (std::uint64_t p : kDirectPrimes) {
      p_tail -= 1 / pow(Real(p), static_cast<int>(k));
    }
    const Real term = Real(ck) * p_tail;
    log_a -= term;
    if (term < eps) break;
  }
  return exp(log_a);
}

void check_coprime(const FactoredModulus& d, const Int& a) {
  if (d.d < 1 || a < 1) {
    throw std::domain_error("modulus and residue must be positive");
  }
  for (const auto& f : d.factors) {
    if (a % f.prime == 0) {
      throw std::domain_error("residue shares a factor with the modulus");
    }
  }
}

std::string pad_fraction(const Int& fp, unsigned decimals) {
  std::string digits = fp.str();
  if (digits.size() < decimals) {
    digits.insert(0, decimals - digits.size(), '0');
  }
  return digits;
}

}  // namespace

FactoredModulus FactoredModulus::from_u64(std::uint64_t d) {
  if (d == 0) throw std::domain_error("modulus must be positive");
  return FactoredModulus{Int(d), modarith::factorize(d)};
}

Real artin_constant(unsigned digits) {
  check_digits(digits, 100);
  static std::mutex mutex;
  static std::map<unsigned, std::string> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(digits);
  if (it == cache.end()) {
    const Real a = artin_uncached(digits);
    it = cache.emplace(digits, a.str(digits + 15)).first;
  }
  PrecisionGuard guard(digits + 15);
  return Real(it->second);
}

Real euler_gamma(unsigned digits) {
  check_digits(digits, 45);
  PrecisionGuard guard(digits + 5);
  return Real(
      "0.57721566490153286060651209008240243104215933593992");
}

Real sqrt_e(unsigned digits) {
  check_digits(digits, 120);
  PrecisionGuard guard(digits + 10);
  return exp(Real(1) / 2);
}

Real irregular_limit_ratio(unsigned digits) {
  check_digits(digits, 120);
  PrecisionGuard guard(digits + 10);
  return 1 - exp(Real(-1) / 2);
}

Rat c_factor(const FactoredModulus& d, const Int& a) {
  check_coprime(d, a);
  unsigned v2 = 0;
  for (const auto& f : d.factors) {
    if (f.prime == 2) v2 = f.exponent;
  }
  if (v2 <= 1) return Rat(3, 4);
  if (v2 == 2) return a % 4 == 1 ? Rat(1, 2) : Rat(1);
  return a % 8 == 1 ? Rat(0) : Rat(1);
}

Rat rational_factor(const FactoredModulus& d, const Int& a) {
  check_coprime(d, a);
  Rat r = 2;
  const Int am1 = a - 1;
  for (const auto& f : d.factors) {
    const Int q(f.prime);
    if (am1 % q == 0) r *= Rat(q - 1, q);
    r *= 1 + Rat(1, q * q - q - 1);
  }
  return r;
}

DensityResult delta(const FactoredModulus& d, const Int& a, unsigned digits) {
  check_digits(digits, 100);
  DensityResult res;
  res.c = c_factor(d, a);
  res.r_over_a = rational_factor(d, a);
  PrecisionGuard guard(digits + 10);
  // Materialize the rational before converting: constructing a Real from an
  // mpq expression template inherits the source's unbounded precision.
  const Rat cr = res.c * res.r_over_a;
  res.delta = Real(cr) * artin_constant(digits + 5);
  if (res.c == 0) {
    res.g_ratio = 1;
  } else {
    res.g_ratio = 1 - res.delta / sqrt_e(digits + 5);
  }
  return res;
}

DensityResult delta(std::uint64_t d, std::uint64_t a, unsigned digits) {
  return delta(FactoredModulus::from_u64(d), Int(a), digits);
}

Real conjectured_g_ratio(std::uint64_t d, std::uint64_t a, unsigned digits) {
  return delta(d, a, digits).g_ratio;
}

Rat euler_phi_over_d(const FactoredModulus& d) {
  Rat r = 1;
  for (const auto& f : d.factors) {
    r *= Rat(Int(f.prime) - 1, Int(f.prime));
  }
  return r;
}

Rat g_of_d(const FactoredModulus& d) {
  Rat r = 1;
  for (const auto& f : d.factors) {
    const Int q(f.prime);
    r *= 1 + Rat(1, q * q - q - 1);
  }
  return r;
}

Rat f_of_d(const FactoredModulus& d) { return euler_phi_over_d(d) * g_of_d(d); }

PrimorialPoint primorial_family(std::uint64_t n, unsigned digits) {
  if (n < 3) throw std::domain_error("primorial family needs n >= 3");
  if (n > 20'000'000) {
    throw ResourceError("primorial family capped at n = 2e7");
  }
  check_digits(digits, 100);

  modarith::SpfSieve sieve(static_cast<std::uint32_t>(n));
  const std::vector<std::uint32_t> primes = sieve.primes();

  // Balanced product of the odd primes; pairwise reduction keeps the GMP
  // multiplications near-equal in size.
  std::vector<Int> layer;
  layer.reserve(primes.size());
  for (std::uint64_t p : primes) {
    if (p > 2) layer.emplace_back(p);
  }
  if (layer.empty()) throw InternalError("no odd primes below n");
  while (layer.size() > 1) {
    std::vector<Int> next;
    next.reserve(layer.size() / 2 + 1);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
      next.push_back(layer[i] * layer[i + 1]);
    }
    if (layer.size() % 2 == 1) next.push_back(std::move(layer.back()));
    layer = std::move(next);
  }

  PrimorialPoint out;
  out.n = n;
  out.d_n = std::move(layer.front());
  out.a_n = out.d_n % 8 == 7 ? Int(2 + 3 * out.d_n) : Int(2 + out.d_n);

  if (out.a_n % 2 == 0 || out.a_n % 8 == 1) {
    throw InternalError("primorial residue landed in a forbidden class");
  }
  // gcd(a_n, 8 d_n) = 1 and gcd(a_n - 1, 8 d_n) a power of two, checked
  // prime by prime instead of through one giant gcd.
  const Int am1 = out.a_n - 1;
  for (std::uint64_t p : primes) {
    if (p == 2) continue;
    if (mpz_fdiv_ui(out.a_n.backend().data(), p) == 0) {
      throw InternalError("primorial residue not coprime to its modulus");
    }
    if (mpz_fdiv_ui(am1.backend().data(), p) == 0) {
      throw InternalError("primorial residue has odd common factor in a-1");
    }
  }

  PrecisionGuard guard(digits + 15);
  const Real a_const = artin_constant(digits + 10);

  Real prod4 = 1;  // prod (p-1)^2 / (p^2 - p - 1) over odd p <= n
  Real prod8 = 1;  // prod (1 - 1/(p(p-1))) over all p <= n
  Real log_d = log(Real(4));
  for (std::uint64_t p : primes) {
    const std::uint64_t pp = p * (p - 1);
    if (p > 2) {
      prod4 *= Real((p - 1) * (p - 1)) / Real(pp - 1);
      log_d += log(Real(p));
    }
    prod8 *= Real(pp - 1) / Real(pp);
  }

  out.delta_4dn_1 = a_const * prod4;
  out.delta_8dn_an = a_const / prod8;
  out.normalized =
      out.delta_4dn_1 * exp(euler_gamma(std::min(digits + 5, 45u))) *
      log(log_d);
  return out;
}

std::string render_truncated(const Real& x, unsigned decimals) {
  if (!mpfr_number_p(x.backend().data()) || x < 0 || decimals > 110) {
    throw std::domain_error("rendering expects finite x >= 0 and <= 110 decimals");
  }
  // A float is a dyadic rational; extracting mantissa and exponent keeps the
  // truncation exact no matter what the ambient precision is.
  if (x == 0) return render_truncated(Rat(0), decimals);
  Int mant;
  const long e2 = static_cast<long>(
      mpfr_get_z_2exp(mant.backend().data(), x.backend().data()));
  Rat r(mant);
  Int two = 1;
  two <<= static_cast<unsigned>(e2 < 0 ? -e2 : e2);
  if (e2 >= 0) {
    r *= two;
  } else {
    r /= two;
  }
  return render_truncated(r, decimals);
}

std::string render_truncated(const Rat& x, unsigned decimals) {
  if (x < 0 || decimals > 110) {
    throw std::domain_error("rendering expects x >= 0 and <= 110 decimals");
  }
  Int p10 = 1;
  for (unsigned i = 0; i < decimals; ++i) p10 *= 10;
  const Int scaled = numerator(x) * p10 / denominator(x);
  const Int ip = scaled / p10;
  const Int fp = scaled % p10;
  if (decimals == 0) return ip.str();
  return ip.str() + "." + pad_fraction(fp, decimals);
}

}  // namespace girr::density
