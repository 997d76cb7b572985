#include "girr/modpseq.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <string>

#include "girr/errors.hpp"

namespace girr::modpseq {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

// fact[i] = i! mod p and inv_fact[i] = (i!)^-1 mod p for i <= n, with a
// single modular inversion (invert n!, then walk down).
struct Factorials {
  std::vector<u32> fact, inv_fact;
  Factorials(std::size_t n, u64 p) : fact(n + 1), inv_fact(n + 1) {
    fact[0] = 1;
    for (std::size_t i = 1; i <= n; ++i)
      fact[i] = static_cast<u32>(static_cast<u64>(fact[i - 1]) * (i % p) % p);
    inv_fact[n] = static_cast<u32>(modarith::inv_mod(fact[n], p));
    for (std::size_t i = n; i > 0; --i)
      inv_fact[i - 1] = static_cast<u32>(static_cast<u64>(inv_fact[i]) * (i % p) % p);
  }
};

void require_kernel_prime(const modarith::PrimeModulus& pm) {
  if (pm.p() >= (u64{1} << 31))
    throw std::domain_error("mod-p series kernels require p < 2^31");
}

}  // namespace

u32 ModSeries::at_even_index(u64 n) const {
  if (n % 2 != 0 || n + 3 > p)
    throw std::domain_error("ModSeries::at_even_index: index must be even and <= p-3");
  return residues[static_cast<std::size_t>(n / 2)];
}

std::vector<u64> ModSeries::irregular_indices() const {
  std::vector<u64> out;
  for (std::size_t k = 1; k < residues.size(); ++k)
    if (residues[k] == 0) out.push_back(2 * static_cast<u64>(k));
  return out;
}

ModSeries bernoulli_all_mod_p(const modarith::PrimeModulus& pm, const KernelConfig& cfg) {
  require_kernel_prime(pm);
  const u64 p = pm.p();
  ModSeries out{p, SeqKind::Bernoulli, {}};
  if (p == 3) return out;

  // Only even indices matter, so work in v = (t/2)^2: the even part of
  // t/(e^t - 1) is (t/2)coth(t/2) = C(v)/S(v) with C = sum_k v^k/(2k)! and
  // S = sum_k v^k/(2k+1)!, giving B_2k = (2k)! 4^{-k} [v^k] C/S at half the
  // series length of the direct expansion.
  const std::size_t slots = static_cast<std::size_t>((p - 1) / 2);  // k = 0..(p-3)/2
  Factorials f(2 * slots - 1, p);
  std::vector<u32> c(slots), s(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    c[k] = f.inv_fact[2 * k];
    s[k] = f.inv_fact[2 * k + 1];
  }
  std::vector<u32> rec = ntt::series_reciprocal(s, slots, p, cfg.mul);
  std::vector<u32> ratio = ntt::multiply_mod(c, rec, p, slots, cfg.mul);
  ratio.resize(slots, 0);

  const u64 inv4 = modarith::inv_mod(4, p);
  u64 inv4k = 1;
  out.residues.resize(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    u64 v = static_cast<u64>(ratio[k]) * f.fact[2 * k] % p;
    out.residues[k] = static_cast<u32>(modarith::mul_mod(v, inv4k, p));
    inv4k = modarith::mul_mod(inv4k, inv4, p);
  }
  return out;
}

ModSeries euler_all_mod_p(const modarith::PrimeModulus& pm, const KernelConfig& cfg) {
  require_kernel_prime(pm);
  const u64 p = pm.p();
  ModSeries out{p, SeqKind::Euler, {}};
  if (p == 3) return out;

  // In u = t^2: sum_k E_2k u^k/(2k)! is the reciprocal of sum_k u^k/(2k)!.
  const std::size_t slots = static_cast<std::size_t>((p - 1) / 2);  // k = 0..(p-3)/2
  Factorials f(2 * slots - 2, p);
  std::vector<u32> series(slots);
  for (std::size_t k = 0; k < slots; ++k) series[k] = f.inv_fact[2 * k];
  std::vector<u32> rec = ntt::series_reciprocal(series, slots, p, cfg.mul);

  out.residues.resize(slots);
  for (std::size_t k = 0; k < slots; ++k)
    out.residues[k] = static_cast<u32>(static_cast<u64>(rec[k]) * f.fact[2 * k] % p);
  return out;
}

ModSeries genocchi_from_bernoulli(const ModSeries& b) {
  if (b.kind != SeqKind::Bernoulli)
    throw std::domain_error("genocchi_from_bernoulli: input is not a Bernoulli series");
  const u64 p = b.p;
  ModSeries out{p, SeqKind::Genocchi, {}};
  out.residues.resize(b.residues.size());
  u64 pow4 = 1;  // 2^2k
  for (std::size_t k = 0; k < b.residues.size(); ++k) {
    u64 factor = (2 * (1 + p - pow4)) % p;  // 2(1 - 2^2k) mod p
    out.residues[k] = static_cast<u32>(factor * b.residues[k] % p);
    pow4 = pow4 * 4 % p;
  }
  return out;
}

ModSeries genocchi_all_mod_p(const modarith::PrimeModulus& pm, const KernelConfig& cfg) {
  return genocchi_from_bernoulli(bernoulli_all_mod_p(pm, cfg));
}

u32 bernoulli_single_mod_p(const modarith::PrimeModulus& pm, u64 m,
                           const modarith::SpfSieve* sieve) {
  require_kernel_prime(pm);
  const u64 p = pm.p();
  if (m % 2 != 0 || m < 2 || m > p - 3)
    throw std::domain_error("bernoulli_single_mod_p: need even m with 2 <= m <= p-3");

  // Smallest base with g^m != 1; exists because x^m = 1 has at most m < p-1
  // roots. g = 2 is valid unless ord_p(2) divides m.
  u64 g = 2;
  while (modarith::pow_mod(g, m, p) == 1) ++g;

  // j^(m-1) for all j < p via the multiplicative structure: one pow_mod per
  // prime, one multiplication per composite.
  std::unique_ptr<modarith::SpfSieve> local_sieve;
  const modarith::SpfSieve* spf_ptr = sieve;
  if (!spf_ptr || spf_ptr->limit() < p - 1) {
    local_sieve = std::make_unique<modarith::SpfSieve>(static_cast<u32>(p - 1));
    spf_ptr = local_sieve.get();
  }
  const modarith::SpfSieve& spf = *spf_ptr;

  std::vector<u32> pw(static_cast<std::size_t>(p), 0);
  pw[1] = 1;
  for (u64 j = 2; j <= p - 1; ++j) {
    u32 q = spf.smallest_factor(static_cast<u32>(j));
    if (q == j)
      pw[j] = static_cast<u32>(modarith::pow_mod(j, m - 1, p));
    else
      pw[j] = static_cast<u32>(static_cast<u64>(pw[q]) * pw[j / q] % p);
  }

  // S = sum_j j^(m-1) floor(gj/p); floor increments by 0 or 1 per step since g < p.
  u128 acc = 0;
  u64 rem = 0, q_j = 0;
  for (u64 j = 1; j <= p - 1; ++j) {
    rem += g;
    if (rem >= p) {
      rem -= p;
      ++q_j;
    }
    acc += static_cast<u128>(pw[j]) * q_j;
  }
  u64 s = static_cast<u64>(acc % p);

  // B_m = m * (g^m - 1)^-1 * g^(m-1) * S  (mod p)
  u64 gm = modarith::pow_mod(g, m, p);
  u64 lead = modarith::mul_mod(m % p, modarith::inv_mod(gm - 1, p), p);
  lead = modarith::mul_mod(lead, modarith::pow_mod(g, m - 1, p), p);
  return static_cast<u32>(modarith::mul_mod(lead, s, p));
}

u32 genocchi_pm1_mod_p(const modarith::PrimeModulus& pm) {
  return static_cast<u32>(2 * modarith::fermat_quotient_2(pm) % pm.p());
}

namespace {

constexpr char kSnapshotMagic[8] = {'G', 'I', 'R', 'R', 'S', 'E', 'Q', '1'};

void put_u64_le(std::ostream& os, u64 v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

u64 get_u64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_snapshot(const ModSeries& series, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw StoreError("write_snapshot: cannot open " + path.string());
  os.write(kSnapshotMagic, 8);
  os.put(static_cast<char>(series.kind));
  put_u64_le(os, series.p);
  put_u64_le(os, series.residues.size());
  for (u32 r : series.residues) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((r >> (8 * i)) & 0xff);
    os.write(b, 4);
  }
  if (!os) throw StoreError("write_snapshot: write failed for " + path.string());
}

ModSeries read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StoreError("read_snapshot: cannot open " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || !std::equal(magic, magic + 8, kSnapshotMagic))
    throw StoreError("read_snapshot: bad magic in " + path.string());
  int kind_byte = is.get();
  if (kind_byte < 0 || kind_byte > 2)
    throw StoreError("read_snapshot: bad kind byte in " + path.string());
  ModSeries out;
  out.kind = static_cast<SeqKind>(kind_byte);
  out.p = get_u64_le(is);
  u64 count = get_u64_le(is);
  out.residues.resize(static_cast<std::size_t>(count));
  for (auto& r : out.residues) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    r = 0;
    for (int i = 0; i < 4; ++i) r |= static_cast<u32>(b[i]) << (8 * i);
  }
  if (!is) throw StoreError("read_snapshot: truncated file " + path.string());
  return out;
}

}  // namespace girr::modpseq
