#pragma once

// Polynomial arithmetic over Z/pZ for word-size primes p, built on
// number-theoretic transforms over fixed transform-friendly moduli with CRT
// recombination. Inputs and outputs are coefficient vectors of residues in
// [0, p). All scratch is per call; safe for concurrent use.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "girr/errors.hpp"

namespace girr::ntt {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct MulConfig {
  // Products whose shorter operand has at most this many coefficients are
  // computed schoolbook; the transform overhead dominates below it.
  std::size_t schoolbook_threshold = 64;
};

// c[k] = sum_{i+j=k} a[i]*b[j] mod p for k < min(out_len, |a|+|b|-1).
// Requires odd p < 2^32; coefficients are reduced mod p on entry. The
// transform length is capped at 2^27 (ResourceError beyond).
std::vector<std::uint32_t> multiply_mod(std::span<const std::uint32_t> a,
                                        std::span<const std::uint32_t> b, std::uint64_t p,
                                        std::size_t out_len = npos, const MulConfig& cfg = {});

// Product modulo x^s - 1: c[k] = sum_{i+j = k mod s} a[i]*b[j] mod p, output
// length exactly s. Requires s a power of two covering both inputs. Callers
// exploit that coefficients of true degree < s come out exact; Newton-type
// iterations pick s so wrapped terms land only where they are discarded.
std::vector<std::uint32_t> multiply_cyclic(std::span<const std::uint32_t> a,
                                           std::span<const std::uint32_t> b, std::uint64_t p,
                                           std::size_t s, const MulConfig& cfg = {});

// First n coefficients of 1/f as a power series over Z/pZ, by Newton
// iteration g <- g(2 - f g) doubling correct coefficients each round.
// Requires f[0] invertible mod p.
std::vector<std::uint32_t> series_reciprocal(std::span<const std::uint32_t> f, std::size_t n,
                                             std::uint64_t p, const MulConfig& cfg = {});

}  // namespace girr::ntt
