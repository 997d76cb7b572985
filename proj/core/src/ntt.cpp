#include "girr/ntt.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "girr/modarith.hpp"

namespace girr::ntt {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::size_t kMaxTransform = std::size_t{1} << 27;

// Transform moduli. m1-1 = 2^27*3*5, m2-1 = 2^27*17, m3-1 = 2^30*3, so all
// support length-2^27 transforms; generators are verified in tests.
template <u32 MOD, u32 ROOT>
struct Field {
  static constexpr u32 mod = MOD;
  static constexpr u32 root = ROOT;
  // Sums are widened to u64 first: two of the moduli sit above 2^31, so
  // a + b and a + (MOD - b) can exceed 32 bits.
  static u32 add(u32 a, u32 b) {
    u64 r = static_cast<u64>(a) + b;
    return static_cast<u32>(r >= MOD ? r - MOD : r);
  }
  static u32 sub(u32 a, u32 b) {
    return a >= b ? a - b : static_cast<u32>(a + (static_cast<u64>(MOD) - b));
  }
  static u32 mul(u32 a, u32 b) { return static_cast<u32>(static_cast<u64>(a) * b % MOD); }
  static u32 pw(u32 b, u64 e) {
    u32 r = 1;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  static u32 inv(u32 a) { return pw(a, MOD - 2); }
};

using F1 = Field<2013265921u, 31u>;
using F2 = Field<2281701377u, 3u>;
using F3 = Field<3221225473u, 5u>;

// Twiddle tables for one transform size: rt[len + j] = w_{2len}^j for each
// power-of-two level len, and rti the inverse powers.
template <class F>
struct Tables {
  std::vector<u32> rt, rti;
  explicit Tables(std::size_t s) : rt(std::max<std::size_t>(s, 1)), rti(rt.size()) {
    rt[0] = rti[0] = 1;
    for (std::size_t len = 1; len < s; len <<= 1) {
      u32 w = F::pw(F::root, (F::mod - 1) / static_cast<u32>(2 * len));
      u32 wi = F::inv(w);
      rt[len] = 1;
      rti[len] = 1;
      for (std::size_t j = 1; j < len; ++j) {
        rt[len + j] = F::mul(rt[len + j - 1], w);
        rti[len + j] = F::mul(rti[len + j - 1], wi);
      }
    }
  }
};

// Gentleman-Sande decimation in frequency; output bit-reversed.
template <class F>
void forward(std::vector<u32>& a, const Tables<F>& t) {
  const std::size_t s = a.size();
  for (std::size_t len = s >> 1; len >= 1; len >>= 1) {
    for (std::size_t i = 0; i < s; i += len << 1) {
      for (std::size_t j = 0; j < len; ++j) {
        u32 u = a[i + j], v = a[i + j + len];
        a[i + j] = F::add(u, v);
        a[i + j + len] = F::mul(F::sub(u, v), t.rt[len + j]);
      }
    }
  }
}

// Cooley-Tukey decimation in time; consumes bit-reversed input, emits
// natural order, and folds in the 1/s scaling.
template <class F>
void inverse(std::vector<u32>& a, const Tables<F>& t) {
  const std::size_t s = a.size();
  for (std::size_t len = 1; len < s; len <<= 1) {
    for (std::size_t i = 0; i < s; i += len << 1) {
      for (std::size_t j = 0; j < len; ++j) {
        u32 u = a[i + j], v = F::mul(a[i + j + len], t.rti[len + j]);
        a[i + j] = F::add(u, v);
        a[i + j + len] = F::sub(u, v);
      }
    }
  }
  u32 sinv = F::inv(static_cast<u32>(s % F::mod));
  for (auto& x : a) x = F::mul(x, sinv);
}

template <class F>
std::vector<u32> conv_one(std::span<const u32> a, std::span<const u32> b, std::size_t s) {
  Tables<F> t(s);
  std::vector<u32> x(s, 0), y(s, 0);
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] % F::mod;
  for (std::size_t i = 0; i < b.size(); ++i) y[i] = b[i] % F::mod;
  forward(x, t);
  forward(y, t);
  for (std::size_t i = 0; i < s; ++i) x[i] = F::mul(x[i], y[i]);
  inverse(x, t);
  return x;
}

std::vector<u32> schoolbook(std::span<const u32> a, std::span<const u32> b, u64 p,
                            std::size_t out_len) {
  std::size_t need = a.size() + b.size() - 1;
  std::size_t n = std::min(need, out_len);
  std::vector<u32> c(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    u128 acc = 0;
    std::size_t i_lo = k >= b.size() ? k - b.size() + 1 : 0;
    std::size_t i_hi = std::min(k, a.size() - 1);
    for (std::size_t i = i_lo; i <= i_hi; ++i)
      acc += static_cast<u64>(a[i]) * b[k - i];
    c[k] = static_cast<u32>(acc % p);
  }
  return c;
}

// Reconstructs true product coefficients from per-modulus convolutions and
// reduces mod p. Coefficients are sums of at most term_bound products of
// residues < p; two transform moduli suffice when that fits their product.
void crt_reduce(const std::vector<u32>& c1, const std::vector<u32>& c2,
                std::span<const u32> a, std::span<const u32> b, u64 p, std::size_t s,
                std::vector<u32>& out) {
  u128 bound = static_cast<u128>(std::min(a.size(), b.size())) * (p - 1) * (p - 1);
  constexpr u128 m12 = static_cast<u128>(F1::mod) * F2::mod;
  std::size_t n = out.size();

  if (bound < m12) {
    const u64 m1 = F1::mod;
    const u64 inv_m1_mod_m2 = modarith::inv_mod(m1 % F2::mod, F2::mod);
    for (std::size_t i = 0; i < n; ++i) {
      u64 x1 = c1[i], x2 = c2[i];
      u64 diff = F2::sub(static_cast<u32>(x2), static_cast<u32>(x1 % F2::mod));
      u64 t = modarith::mul_mod(diff, inv_m1_mod_m2, F2::mod);
      u64 v = x1 + m1 * t;  // < m1*m2 < 2^63
      out[i] = static_cast<u32>(v % p);
    }
    return;
  }

  std::vector<u32> c3 = conv_one<F3>(a, b, s);
  const u64 m1 = F1::mod, m2 = F2::mod;
  const u64 inv_m1_mod_m2 = modarith::inv_mod(m1 % m2, m2);
  const u64 inv_m12_mod_m3 =
      modarith::inv_mod(modarith::mul_mod(m1 % F3::mod, m2 % F3::mod, F3::mod), F3::mod);
  for (std::size_t i = 0; i < n; ++i) {
    u64 x1 = c1[i], x2 = c2[i], x3 = c3[i];
    u64 t2 = modarith::mul_mod(F2::sub(static_cast<u32>(x2), static_cast<u32>(x1 % m2)),
                               inv_m1_mod_m2, m2);
    u64 v12_mod_m3 = (x1 + modarith::mul_mod(m1 % F3::mod, t2, F3::mod)) % F3::mod;
    u64 t3 = modarith::mul_mod(F3::sub(static_cast<u32>(x3), static_cast<u32>(v12_mod_m3)),
                               inv_m12_mod_m3, F3::mod);
    u128 v = static_cast<u128>(x1) + static_cast<u128>(m1) * t2 +
             static_cast<u128>(m1) * m2 * t3;
    out[i] = static_cast<u32>(static_cast<u64>(v % p));
  }
}

}  // namespace

std::vector<u32> multiply_mod(std::span<const u32> a, std::span<const u32> b, u64 p,
                              std::size_t out_len, const MulConfig& cfg) {
  if (p < 3 || p >= (u64{1} << 32)) throw std::domain_error("multiply_mod: need odd p < 2^32");
  if (a.empty() || b.empty() || out_len == 0) return {};
  // Coefficients at positions >= out_len never influence the kept prefix.
  if (out_len < a.size()) a = a.subspan(0, out_len);
  if (out_len < b.size()) b = b.subspan(0, out_len);

  if (std::min(a.size(), b.size()) <= cfg.schoolbook_threshold) return schoolbook(a, b, p, out_len);

  std::size_t need = a.size() + b.size() - 1;
  std::size_t s = std::bit_ceil(need);
  if (s > kMaxTransform)
    throw ResourceError("multiply_mod: transform length " + std::to_string(s) + " exceeds 2^27");

  std::vector<u32> c1 = conv_one<F1>(a, b, s);
  std::vector<u32> c2 = conv_one<F2>(a, b, s);
  std::vector<u32> out(std::min(need, out_len));
  crt_reduce(c1, c2, a, b, p, s, out);
  return out;
}

std::vector<u32> multiply_cyclic(std::span<const u32> a, std::span<const u32> b, u64 p,
                                 std::size_t s, const MulConfig& cfg) {
  if (p < 3 || p >= (u64{1} << 32)) throw std::domain_error("multiply_cyclic: need odd p < 2^32");
  if (!std::has_single_bit(s) || s < std::max(a.size(), b.size()))
    throw std::domain_error("multiply_cyclic: length must be a power of two covering both inputs");
  if (s > kMaxTransform)
    throw ResourceError("multiply_cyclic: transform length " + std::to_string(s) +
                        " exceeds 2^27");
  if (a.empty() || b.empty()) return std::vector<u32>(s, 0);

  if (std::min(a.size(), b.size()) <= cfg.schoolbook_threshold) {
    std::vector<u32> lin = schoolbook(a, b, p, npos);
    lin.resize(std::max(lin.size(), s), 0);
    // Fold the linear tail back; |lin| < 2s, so one pass suffices.
    for (std::size_t k = s; k < lin.size(); ++k)
      lin[k - s] = static_cast<u32>((static_cast<u64>(lin[k - s]) + lin[k]) % p);
    lin.resize(s);
    return lin;
  }

  std::vector<u32> c1 = conv_one<F1>(a, b, s);
  std::vector<u32> c2 = conv_one<F2>(a, b, s);
  std::vector<u32> out(s);
  crt_reduce(c1, c2, a, b, p, s, out);
  return out;
}

std::vector<u32> series_reciprocal(std::span<const u32> f, std::size_t n, u64 p,
                                   const MulConfig& cfg) {
  if (n == 0) return {};
  if (f.empty()) throw std::domain_error("series_reciprocal: empty series");
  u32 f0 = static_cast<u32>(f[0] % p);
  u64 inv_f0 = modarith::inv_mod(f0, p);

  // Schoolbook warm-up: g[k] = -f0^{-1} * sum_{j=1..k} f[j] g[k-j].
  std::size_t base = std::min(n, std::max<std::size_t>(cfg.schoolbook_threshold, 1));
  std::vector<u32> g(base);
  g[0] = static_cast<u32>(inv_f0);
  for (std::size_t k = 1; k < base; ++k) {
    u128 acc = 0;
    std::size_t j_hi = std::min(k, f.size() - 1);
    for (std::size_t j = 1; j <= j_hi; ++j)
      acc += static_cast<u64>(f[j] % p) * g[k - j];
    u64 s = static_cast<u64>(acc % p);
    g[k] = static_cast<u32>(modarith::mul_mod(s == 0 ? 0 : p - s, inv_f0, p));
  }

  // Newton step, wrap-around form: with f*g = 1 + x^m h (mod x^nlen), the
  // update g(2 - f*g) = g - x^m (g*h mod x^{nlen-m}) needs two products. Both
  // are taken cyclically at length bit_ceil(nlen): the wrapped terms of f*g
  // land below index m and only indices [m, nlen) are read, and g*h has true
  // degree < nlen - 1, so nothing wraps at all.
  while (g.size() < n) {
    std::size_t m = g.size();
    std::size_t nlen = std::min(m * 2, n);
    std::size_t s = std::bit_ceil(nlen);
    std::span<const u32> f_cut = f.subspan(0, std::min(f.size(), nlen));

    std::vector<u32> t = multiply_cyclic(f_cut, g, p, s, cfg);
    std::vector<u32> h(t.begin() + static_cast<std::ptrdiff_t>(m),
                       t.begin() + static_cast<std::ptrdiff_t>(nlen));
    std::vector<u32> e = multiply_cyclic(g, h, p, s, cfg);

    g.resize(nlen);
    for (std::size_t i = m; i < nlen; ++i) {
      u32 v = e[i - m];
      g[i] = v == 0 ? 0 : static_cast<u32>(p - v);
    }
  }
  return g;
}

}  // namespace girr::ntt
