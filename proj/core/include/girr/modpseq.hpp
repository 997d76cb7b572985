#pragma once

// Dense residue arrays B_2k mod p, E_2k mod p, G_2k mod p for 0 <= 2k <= p-3:
// the kernel of every irregularity scan. The all-indices computations run in
// O(p polylog p) via power-series reciprocals (see docs/math-notes.md); the
// Voronoi-sum path provides an independent O(p) reference for single indices.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "girr/modarith.hpp"
#include "girr/ntt.hpp"

namespace girr::modpseq {

enum class SeqKind : std::uint8_t { Bernoulli = 0, Euler = 1, Genocchi = 2 };

struct ModSeries {
  std::uint64_t p = 0;
  SeqKind kind = SeqKind::Bernoulli;
  // Slot k holds the residue at index 2k, for 0 <= 2k <= p-3. Empty for
  // p = 3, where no even index is in range.
  std::vector<std::uint32_t> residues;

  std::size_t slots() const noexcept { return residues.size(); }

  // Value at even index n, 0 <= n <= p-3.
  std::uint32_t at_even_index(std::uint64_t n) const;

  // Even indices 2k with 2 <= 2k <= p-3 whose residue vanishes; ascending.
  std::vector<std::uint64_t> irregular_indices() const;
};

struct KernelConfig {
  ntt::MulConfig mul;
};

// Slot k = B_2k mod p. Requires p >= 5 (p = 3 yields an empty series).
ModSeries bernoulli_all_mod_p(const modarith::PrimeModulus& p, const KernelConfig& cfg = {});

// Slot k = E_2k mod p.
ModSeries euler_all_mod_p(const modarith::PrimeModulus& p, const KernelConfig& cfg = {});

// Slot k = G_2k mod p, computed as 2(1 - 2^2k) B_2k from a fresh Bernoulli
// series (cost dominated by the Bernoulli kernel plus O(p) post-processing).
ModSeries genocchi_all_mod_p(const modarith::PrimeModulus& p, const KernelConfig& cfg = {});

// Same transformation applied to an existing Bernoulli series.
ModSeries genocchi_from_bernoulli(const ModSeries& bernoulli);

// Independent reference: B_m mod p by the Voronoi congruence
//   (g^m - 1) B_m / m  =  g^(m-1) * sum_{j=1}^{p-1} j^(m-1) floor(g j / p)  (mod p)
// with the smallest base g >= 2 satisfying g^m != 1 mod p (g = 2 works unless
// ord_p(2) | m). O(p) per call; m must be even with 2 <= m <= p-3.
std::uint32_t bernoulli_single_mod_p(const modarith::PrimeModulus& p, std::uint64_t m,
                                     const modarith::SpfSieve* sieve = nullptr);

// G_{p-1} mod p. The index p-1 sits outside the series range; the value is
// 2 * fermat_quotient_2(p) mod p, from G_{p-1} = 2(1 - 2^(p-1)) B_{p-1} and
// von Staudt-Clausen (p B_{p-1} = -1 mod p). Zero exactly for Wieferich p.
std::uint32_t genocchi_pm1_mod_p(const modarith::PrimeModulus& p);

// Binary snapshot (magic "GIRRSEQ1", kind byte, little-endian p, count,
// residues); see docs/formats.md.
void write_snapshot(const ModSeries& series, const std::filesystem::path& path);
ModSeries read_snapshot(const std::filesystem::path& path);

}  // namespace girr::modpseq
