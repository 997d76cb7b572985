#pragma once

// Exact modular arithmetic, factorization, multiplicative orders, and the
// Fermat-quotient/Wieferich primitives. Everything here is a pure function of
// its inputs; the sieve is built once and may be shared read-only between
// threads.

#include <cstdint>
#include <vector>

#include "girr/errors.hpp"

namespace girr::modarith {

// (a * b) mod m with a 128-bit intermediate. Valid for any m < 2^63.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;

// base^exp mod m by binary exponentiation. Intermediates are exact for
// m <= 2^62 (covers p^2 for every p < 2^31, as the Wieferich test needs).
// Throws std::domain_error for m < 2 or m > 2^62.
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Inverse of a modulo m via extended gcd; throws std::domain_error unless
// gcd(a, m) = 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

// Deterministic Miller-Rabin over the 12-base set that is exact for all
// n < 2^64. Used for ad-hoc inputs; scans validate against the sieve.
bool is_prime_u64(std::uint64_t n);

// Smallest-prime-factor table over [0, limit].
//
// Memory: 4 bytes per entry, so the default cap of 2^28 entries bounds the
// table at 1 GiB. Construction beyond the cap throws ResourceError.
class SpfSieve {
 public:
  static constexpr std::size_t kDefaultEntryCap = std::size_t{1} << 28;

  explicit SpfSieve(std::uint32_t limit, std::size_t entry_cap = kDefaultEntryCap);

  std::uint32_t limit() const noexcept { return limit_; }

  // Least prime dividing n; smallest_factor(p) = p for prime p.
  // Requires 2 <= n <= limit.
  std::uint32_t smallest_factor(std::uint32_t n) const;

  // Requires n <= limit.
  bool is_prime(std::uint32_t n) const;

  // All primes <= limit in ascending order (2 included).
  std::vector<std::uint32_t> primes() const;

  // Primes in [lo, hi] (both clamped to the sieve limit), ascending.
  std::vector<std::uint32_t> primes_in(std::uint32_t lo, std::uint32_t hi) const;

  std::uint64_t prime_count() const noexcept { return prime_count_; }

 private:
  std::uint32_t limit_;
  std::uint64_t prime_count_;
  std::vector<std::uint32_t> spf_;
};

struct Factor {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const Factor&, const Factor&) = default;
};

// Primes strictly increasing; product of prime^exponent reconstructs n.
using Factorization = std::vector<Factor>;

// Factorization of n >= 1 (empty for n = 1). Uses the sieve's table when it
// covers n; otherwise trial division by small primes followed by Brent's
// cycle-finding rho with deterministic retry seeds.
Factorization factorize(std::uint64_t n, const SpfSieve* sieve = nullptr);

// An odd prime p carried together with the factorization of p - 1.
// Construction runs a deterministic primality check (sieve trial division
// when available, Miller-Rabin otherwise) and throws std::domain_error for
// anything that is not an odd prime.
class PrimeModulus {
 public:
  explicit PrimeModulus(std::uint64_t p, const SpfSieve* sieve = nullptr);

  std::uint64_t p() const noexcept { return p_; }
  const Factorization& p_minus_1() const noexcept { return pm1_; }

 private:
  std::uint64_t p_;
  Factorization pm1_;
};

struct OrderReport {
  std::uint64_t g;
  std::uint64_t p;
  std::uint64_t order;  // divides p - 1; g^order = 1, g^(order/q) != 1 for q | order
};

// Multiplicative order of g mod p, computed by starting from p - 1 and
// stripping prime factors while the power stays 1. Throws std::domain_error
// when p | g.
OrderReport multiplicative_order(std::uint64_t g, const PrimeModulus& p);

// True iff ord_p(4) = (p - 1)/2.
bool ord4_is_half(const PrimeModulus& p);

// Fermat quotient q_2(p) = ((2^(p-1) - 1)/p) mod p, via pow_mod with modulus
// p^2. Requires odd p < 2^31 so that p^2 honors the pow_mod contract.
std::uint64_t fermat_quotient_2(const PrimeModulus& p);

// True iff p^2 divides 2^(p-1) - 1, i.e. fermat_quotient_2(p) = 0.
bool is_wieferich(const PrimeModulus& p);

}  // namespace girr::modarith
