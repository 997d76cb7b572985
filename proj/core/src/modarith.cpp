#include "girr/modarith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace girr::modarith {

namespace {

constexpr std::uint64_t kPowModMax = std::uint64_t{1} << 62;

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m < 2 || m > kPowModMax)
    throw std::domain_error("pow_mod: modulus must be in [2, 2^62], got " + std::to_string(m));
  std::uint64_t r = 1 % m;
  std::uint64_t b = base % m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  if (m < 2) throw std::domain_error("inv_mod: modulus must be >= 2");
  std::int64_t t = 0, new_t = 1;
  std::uint64_t r = m, new_r = a % m;
  while (new_r != 0) {
    std::uint64_t q = r / new_r;
    std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
    t = new_t;
    new_t = tmp_t;
    std::uint64_t tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1)
    throw std::domain_error("inv_mod: " + std::to_string(a) + " not invertible mod " +
                            std::to_string(m));
  return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m))
               : static_cast<std::uint64_t>(t);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  // n is odd and > 37 here. Write n - 1 = d * 2^s.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto mul_mod_big = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
  };
  auto pow_mod_big = [&](std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1, b = base % n;
    while (exp) {
      if (exp & 1) r = mul_mod_big(r, b);
      b = mul_mod_big(b, b);
      exp >>= 1;
    }
    return r;
  };
  // This base set is exact for all n < 2^64 (Sorenson-Webster).
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod_big(a, d);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod_big(x, x);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

SpfSieve::SpfSieve(std::uint32_t limit, std::size_t entry_cap) : limit_(limit), prime_count_(0) {
  if (limit < 2) throw std::domain_error("SpfSieve: limit must be >= 2");
  std::size_t entries = static_cast<std::size_t>(limit) + 1;
  if (entries > entry_cap)
    throw ResourceError("SpfSieve: " + std::to_string(entries) + " entries exceed cap of " +
                        std::to_string(entry_cap) + " (4 bytes each)");
  spf_.assign(entries, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      ++prime_count_;
      for (std::uint64_t j = i; j <= limit; j += i) {
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
      }
    }
  }
}

std::uint32_t SpfSieve::smallest_factor(std::uint32_t n) const {
  if (n < 2 || n > limit_) throw std::domain_error("SpfSieve::smallest_factor: n out of range");
  return spf_[n];
}

bool SpfSieve::is_prime(std::uint32_t n) const {
  if (n > limit_) throw std::domain_error("SpfSieve::is_prime: n beyond sieve limit");
  return n >= 2 && spf_[n] == n;
}

std::vector<std::uint32_t> SpfSieve::primes() const { return primes_in(2, limit_); }

std::vector<std::uint32_t> SpfSieve::primes_in(std::uint32_t lo, std::uint32_t hi) const {
  hi = std::min(hi, limit_);
  std::vector<std::uint32_t> out;
  for (std::uint64_t n = std::max<std::uint32_t>(lo, 2); n <= hi; ++n) {
    if (spf_[n] == n) out.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

namespace {

// Brent's variant of Pollard rho. Deterministic: the polynomial increment
// walks 1, 2, 3, ... until a factor splits off. n must be odd, composite,
// and free of factors below the trial-division bound used by the caller.
std::uint64_t rho_brent(std::uint64_t n) {
  auto mul = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
  };
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    std::uint64_t power = 1, lam = 0;
    auto step = [&](std::uint64_t v) { return (mul(v, v) + c) % n; };
    while (d == 1) {
      if (power == lam) {
        x = y;
        power <<= 1;
        lam = 0;
      }
      // Batch gcds in groups of 64 to amortize the gcd cost.
      std::uint64_t q = 1;
      std::uint64_t saved_y = y;
      std::uint64_t batch = std::min<std::uint64_t>(64, power - lam);
      for (std::uint64_t i = 0; i < batch; ++i) {
        y = step(y);
        std::uint64_t diff = x > y ? x - y : y - x;
        if (diff == 0) diff = 1;
        q = mul(q, diff);
      }
      lam += batch;
      d = gcd_u64(q, n);
      if (d == n) {
        // Backtrack one step at a time.
        y = saved_y;
        d = 1;
        for (std::uint64_t i = 0; i < batch && d == 1; ++i) {
          y = step(y);
          std::uint64_t diff = x > y ? x - y : y - x;
          if (diff == 0) diff = 1;
          d = gcd_u64(diff, n);
        }
        if (d == 1 || d == n) break;  // cycle exhausted for this c, retry
      }
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_recursive(std::uint64_t n, std::vector<std::uint64_t>& primes_out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes_out.push_back(n);
    return;
  }
  std::uint64_t d = rho_brent(n);
  factor_recursive(d, primes_out);
  factor_recursive(n / d, primes_out);
}

Factorization collect(std::vector<std::uint64_t>& primes_flat) {
  std::sort(primes_flat.begin(), primes_flat.end());
  Factorization out;
  for (std::size_t i = 0; i < primes_flat.size();) {
    std::size_t j = i;
    while (j < primes_flat.size() && primes_flat[j] == primes_flat[i]) ++j;
    out.push_back({primes_flat[i], static_cast<unsigned>(j - i)});
    i = j;
  }
  return out;
}

}  // namespace

Factorization factorize(std::uint64_t n, const SpfSieve* sieve) {
  if (n == 0) throw std::domain_error("factorize: n must be >= 1");
  std::vector<std::uint64_t> flat;
  if (sieve && n <= sieve->limit()) {
    std::uint32_t m = static_cast<std::uint32_t>(n);
    while (m > 1) {
      std::uint32_t q = sieve->smallest_factor(m);
      flat.push_back(q);
      m /= q;
    }
  } else {
    // Pull out small factors by direct trial division, then rho.
    for (std::uint64_t q : {2ull, 3ull, 5ull}) {
      while (n % q == 0) {
        flat.push_back(q);
        n /= q;
      }
    }
    for (std::uint64_t q = 7; q < 10000 && q * q <= n; q += 2) {
      while (n % q == 0) {
        flat.push_back(q);
        n /= q;
      }
    }
    if (n > 1) factor_recursive(n, flat);
  }
  return collect(flat);
}

PrimeModulus::PrimeModulus(std::uint64_t p, const SpfSieve* sieve) : p_(p) {
  bool ok;
  if (sieve && p <= sieve->limit()) {
    ok = sieve->is_prime(static_cast<std::uint32_t>(p)) && p != 2;
  } else {
    ok = (p != 2) && is_prime_u64(p);
  }
  if (!ok) throw std::domain_error("PrimeModulus: " + std::to_string(p) + " is not an odd prime");
  pm1_ = factorize(p - 1, sieve);
  std::uint64_t check = 1;
  for (const auto& f : pm1_)
    for (unsigned e = 0; e < f.exponent; ++e) check *= f.prime;
  if (check != p - 1) throw InternalError("PrimeModulus: factorization does not multiply back");
}

OrderReport multiplicative_order(std::uint64_t g, const PrimeModulus& pm) {
  std::uint64_t p = pm.p();
  std::uint64_t base = g % p;
  if (base == 0) throw std::domain_error("multiplicative_order: base divisible by p");
  std::uint64_t order = p - 1;
  for (const auto& f : pm.p_minus_1()) {
    for (unsigned e = 0; e < f.exponent; ++e) {
      if (order % f.prime != 0) break;
      std::uint64_t reduced = order / f.prime;
      if (pow_mod(base, reduced, p) == 1)
        order = reduced;
      else
        break;
    }
  }
  return {g, p, order};
}

bool ord4_is_half(const PrimeModulus& pm) {
  return multiplicative_order(4, pm).order == (pm.p() - 1) / 2;
}

std::uint64_t fermat_quotient_2(const PrimeModulus& pm) {
  std::uint64_t p = pm.p();
  if (p >= (std::uint64_t{1} << 31))
    throw std::domain_error("fermat_quotient_2: p must be < 2^31 so p^2 fits pow_mod");
  std::uint64_t p2 = p * p;
  std::uint64_t r = pow_mod(2, p - 1, p2);  // 2^(p-1) mod p^2, = 1 + q2*p (mod p^2)
  return (r - 1) / p;
}

bool is_wieferich(const PrimeModulus& pm) { return fermat_quotient_2(pm) == 0; }

}  // namespace girr::modarith
