#pragma once

// Densities of primes with ord_p(4) = (p-1)/2 in arithmetic progressions:
// delta(d,a) = c(d,a) * R(d,a) * A with c in {0, 1/2, 3/4, 1}, R an explicit
// rational Euler-type factor, and A the Artin constant. The rational parts
// are exact; only the final value is floating point, at a caller-chosen
// precision. Includes the extremal primorial family (d_n, a_n) and the
// conjectured irregular-prime ratio columns built from these densities.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "girr/modarith.hpp"

namespace girr::density {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

// A modulus carried with its full prime factorization; supports moduli with
// thousands of prime factors, where refactoring would be infeasible.
struct FactoredModulus {
  Int d;
  modarith::Factorization factors;  // ascending primes; product = d

  static FactoredModulus from_u64(std::uint64_t d);
};

// Artin's constant A = prod_p (1 - 1/(p(p-1))), accurate to `digits` decimal
// digits (1 <= digits <= 100). Evaluated via prime-zeta acceleration: the
// log of the Euler product beyond a small bound is expanded in prime zeta
// values P(k), each obtained from log zeta(kn) by Moebius inversion.
Real artin_constant(unsigned digits);

// 50-digit Euler-Mascheroni constant literal (cross-checked in tests against
// the library constant); parsed at the requested precision.
Real euler_gamma(unsigned digits);

// sqrt(e) and the B/E-irregular limit ratio 1 - 1/sqrt(e).
Real sqrt_e(unsigned digits);
Real irregular_limit_ratio(unsigned digits);

// The c(d,a) case table. Throws std::domain_error unless gcd(a,d) = 1.
Rat c_factor(const FactoredModulus& d, const Int& a);

// R(d,a) = 2 * prod_{p | gcd(a-1,d)} (1 - 1/p) * prod_{p|d} (1 + 1/(p^2-p-1)).
Rat rational_factor(const FactoredModulus& d, const Int& a);

struct DensityResult {
  Rat c;           // {0, 1/2, 3/4, 1}
  Rat r_over_a;    // R(d,a): delta = c * r_over_a * A
  Real delta;      // c(d,a) R(d,a) A
  Real g_ratio;    // 1 - delta/sqrt(e); exactly 1 when c = 0
};

DensityResult delta(const FactoredModulus& d, const Int& a, unsigned digits);
DensityResult delta(std::uint64_t d, std::uint64_t a, unsigned digits);

// 1 - delta(d,a)/sqrt(e), the conjectured limit of the G-irregular ratio in
// the class a mod d.
Real conjectured_g_ratio(std::uint64_t d, std::uint64_t a, unsigned digits);

// phi(d)/d, G(d) = prod_{p|d} (1 + 1/(p^2-p-1)), F(d) = phi(d)/d * G(d).
Rat euler_phi_over_d(const FactoredModulus& d);
Rat g_of_d(const FactoredModulus& d);
Rat f_of_d(const FactoredModulus& d);

// The extremal family d_n = prod of odd primes <= n, with a_n = 2 + 3 d_n
// when d_n = 7 mod 8 and 2 + d_n otherwise. The construction guarantees (and
// this function asserts, prime by prime) that a_n != 1 mod 8, gcd(a_n, 8d_n)
// = 1, and gcd(a_n - 1, 8 d_n) is a power of two. Density values use the
// factored closed forms throughout; no big rationals are formed.
struct PrimorialPoint {
  std::uint64_t n = 0;
  Int d_n;
  Int a_n;
  Real delta_4dn_1;   // A * prod_{3<=p<=n} (p-1)^2/(p^2-p-1)
  Real normalized;    // delta_4dn_1 * e^gamma * log log(4 d_n)
  Real delta_8dn_an;  // A / prod_{p<=n} (1 - 1/(p(p-1)))
};

PrimorialPoint primorial_family(std::uint64_t n, unsigned digits);

// Decimal rendering with truncation toward zero (the table convention:
// "the first six digits of the decimal parts"), e.g. 0.448746976 -> "0.448746".
// The rational overload truncates exactly, with no float intermediate; use it
// for observed-count ratios so values sitting on a digit boundary cannot be
// nudged across it by rounding.
std::string render_truncated(const Real& x, unsigned decimals = 6);
std::string render_truncated(const Rat& x, unsigned decimals = 6);

}  // namespace girr::density
