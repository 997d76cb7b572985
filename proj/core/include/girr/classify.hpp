#pragma once

// Per-prime classification: B-/E-/G-irregularity, the order-condition
// equivalence (a prime is G-regular iff it is B-regular and ord_p(4) =
// (p-1)/2), Q-class membership by residue mod 8, Wieferich status, and the
// refined class-number residue.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "girr/modarith.hpp"
#include "girr/modpseq.hpp"

namespace girr::classify {

enum class QClass { NotInQ, Q3, Q5, Q7 };

struct PrimeRecord {
  std::uint64_t p = 0;
  unsigned residue_mod_8 = 0;  // p mod 8, in {1,3,5,7} (3 for p = 3)
  std::uint64_t ord2 = 0;      // ord_p(2)
  bool ord4_is_half = false;   // ord_p(4) == (p-1)/2

  // Set only when the corresponding series/flag was requested. Even indices
  // 2k <= p-3 whose Bernoulli numerator (resp. Euler number) p divides.
  std::optional<std::vector<std::uint64_t>> b_irregular_indices;
  std::optional<std::vector<std::uint64_t>> e_irregular_indices;
  std::optional<bool> g_irregular;
  std::optional<bool> wieferich;
  // Residue of the refined class-number product; computed only for p >= 5.
  std::optional<std::uint32_t> h_refined_residue;

  friend bool operator==(const PrimeRecord&, const PrimeRecord&) = default;
};

// Assembles a record from whatever inputs are supplied (null series leave
// the matching fields unset). When G-irregularity is determinable by both
// the definitional route (a zero slot in the Genocchi series) and the
// order/Bernoulli route, the two are cross-checked and a mismatch throws
// InternalError. Series belonging to a different prime or of unexpected
// kind/length throw std::domain_error.
PrimeRecord classify_prime(const modarith::PrimeModulus& p,
                           const modpseq::ModSeries* bernoulli,
                           const modpseq::ModSeries* euler,
                           const modpseq::ModSeries* genocchi,
                           bool want_wieferich = false,
                           bool want_h_residue = false);

// Short-circuit G-irregularity test: ord_p(4) != (p-1)/2 already proves
// G-irregular with no series work; otherwise the Bernoulli kernel decides.
bool g_irregular_fast(const modarith::PrimeModulus& p, const modpseq::KernelConfig& cfg = {});

// Q(d,a) membership: NotInQ unless ord_p(4) = (p-1)/2, else the residue
// class of p mod 8. Q1 is impossible (InternalError if it would arise); for
// members, ord_p(2) = p-1 when p = 3,5 mod 8 and (p-1)/2 when p = 7 mod 8,
// asserted.
QClass q_class(const modarith::PrimeModulus& p);

// Residue mod p of
//   (-1)^((p-1)/2) * 2^(2-p) * ((p-1)!!)^(-1) * G_2 G_4 ... G_{p-3} * G_{p-1}
// where (p-1)!! = 2*4*...*(p-1) and G_{p-1} enters as 2*q_2(p). Zero iff a
// factor vanishes, i.e. iff p is G-irregular or Wieferich. Requires p >= 5.
std::uint32_t h_refined_mod_p(const modarith::PrimeModulus& p,
                              const modpseq::ModSeries& genocchi);

// One JSON object per line, fields exactly in declaration order; unset
// optionals serialize as null. The persistence contract of the scan store.
std::string to_jsonl(const PrimeRecord& rec);
PrimeRecord record_from_jsonl(const std::string& line);

}  // namespace girr::classify
