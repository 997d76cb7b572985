#pragma once

// Exact big-integer/rational oracle for Genocchi, Euler, and Bernoulli
// numbers and for Euler polynomial values at 0. Everything is computed by
// the classical recurrences in exact arithmetic; this layer exists to
// validate the fast mod-p kernels, so clarity beats speed (O(N^2) bignum
// work is fine for the oracle range N <= ~2000).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace girr::exactnums {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;  // always stored reduced, denominator > 0

enum class SeqKind { Genocchi, Euler, Bernoulli, EulerPolyAtZero };

// G_0..G_N from the recurrence 2*G_n = -sum_{k=1}^{n-1} C(n,k) G_k (n >= 2),
// G_0 = 0, G_1 = 1, derived from the generating function 2t/(e^t + 1)
// (see docs/math-notes.md).
std::vector<Int> genocchi_exact(unsigned n_max);

// E_0..E_N; odd indices are 0 and E_{2m} = -sum_{j<m} C(2m,2j) E_{2j}.
std::vector<Int> euler_exact(unsigned n_max);

// B_0..B_N with B_1 = -1/2; B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k.
std::vector<Rat> bernoulli_exact(unsigned n_max);

// E_0(0)..E_N(0) from the independent recurrence
// E_n(0) = -(1/2) sum_{k<n} C(n,k) E_k(0), E_0(0) = 1 (from 2/(e^t + 1)).
// Deliberately NOT computed via G_{n+1}/(n+1): the identity
// G_n = n*E_{n-1}(0) is cross-checked in tests against this route.
std::vector<Rat> euler_poly_at_zero_exact(unsigned n_max);

// Single value E_n(0).
Rat euler_poly_at_zero(unsigned n);

// One JSON object per line: {"kind":...,"n":i,"value":"<decimal string>"}.
// Rationals render as "num/den" ("-1/2"), integers as plain decimals.
void dump_jsonl(SeqKind kind, unsigned n_max, std::ostream& out);

}  // namespace girr::exactnums
