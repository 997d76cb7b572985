#include "girr/classify.hpp"

#include <nlohmann/json.hpp>

namespace girr::classify {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

void check_series(const modpseq::ModSeries& s, const modarith::PrimeModulus& pm,
                  modpseq::SeqKind kind) {
  if (s.p != pm.p()) throw std::domain_error("classify: series computed for a different prime");
  if (s.kind != kind) throw std::domain_error("classify: series of unexpected kind");
  std::size_t expect = pm.p() == 3 ? 0 : static_cast<std::size_t>((pm.p() - 1) / 2);
  if (s.slots() != expect) throw std::domain_error("classify: series has unexpected length");
}

}  // namespace

PrimeRecord classify_prime(const modarith::PrimeModulus& pm, const modpseq::ModSeries* bernoulli,
                           const modpseq::ModSeries* euler, const modpseq::ModSeries* genocchi,
                           bool want_wieferich, bool want_h_residue) {
  const u64 p = pm.p();
  PrimeRecord rec;
  rec.p = p;
  rec.residue_mod_8 = static_cast<unsigned>(p % 8);
  rec.ord2 = modarith::multiplicative_order(2, pm).order;
  // ord_p(4) = ord_p(2) when the latter is odd, ord_p(2)/2 when even.
  u64 ord4 = rec.ord2 % 2 == 1 ? rec.ord2 : rec.ord2 / 2;
  rec.ord4_is_half = ord4 == (p - 1) / 2;

  if (bernoulli) {
    check_series(*bernoulli, pm, modpseq::SeqKind::Bernoulli);
    rec.b_irregular_indices = bernoulli->irregular_indices();
  }
  if (euler) {
    check_series(*euler, pm, modpseq::SeqKind::Euler);
    rec.e_irregular_indices = euler->irregular_indices();
  }
  if (genocchi) {
    check_series(*genocchi, pm, modpseq::SeqKind::Genocchi);
    rec.g_irregular = !genocchi->irregular_indices().empty();
  }

  // Theorem route: G-irregular iff B-irregular or ord_p(4) != (p-1)/2.
  if (!rec.ord4_is_half) {
    if (rec.g_irregular.has_value()) {
      if (!*rec.g_irregular)
        throw InternalError("classify: order route says G-irregular, series disagrees (p=" +
                            std::to_string(p) + ")");
    } else {
      rec.g_irregular = true;
    }
  } else if (rec.b_irregular_indices.has_value()) {
    bool theorem_irregular = !rec.b_irregular_indices->empty();
    if (rec.g_irregular.has_value()) {
      if (*rec.g_irregular != theorem_irregular)
        throw InternalError("classify: definitional and theorem G-irregularity disagree (p=" +
                            std::to_string(p) + ")");
    } else {
      rec.g_irregular = theorem_irregular;
    }
  }

  if (want_wieferich) rec.wieferich = modarith::is_wieferich(pm);
  if (want_h_residue && p >= 5) {
    if (!genocchi) throw std::domain_error("classify: h residue requires the Genocchi series");
    rec.h_refined_residue = h_refined_mod_p(pm, *genocchi);
  }
  return rec;
}

bool g_irregular_fast(const modarith::PrimeModulus& pm, const modpseq::KernelConfig& cfg) {
  if (!modarith::ord4_is_half(pm)) return true;
  if (pm.p() == 3) return false;
  return !modpseq::bernoulli_all_mod_p(pm, cfg).irregular_indices().empty();
}

QClass q_class(const modarith::PrimeModulus& pm) {
  if (!modarith::ord4_is_half(pm)) return QClass::NotInQ;
  const u64 p = pm.p();
  const u64 ord2 = modarith::multiplicative_order(2, pm).order;
  switch (p % 8) {
    case 3:
    case 5:
      if (ord2 != p - 1)
        throw InternalError("q_class: member with p = 3,5 mod 8 must have ord_p(2) = p-1");
      return p % 8 == 3 ? QClass::Q3 : QClass::Q5;
    case 7:
      if (ord2 != (p - 1) / 2)
        throw InternalError("q_class: member with p = 7 mod 8 must have ord_p(2) = (p-1)/2");
      return QClass::Q7;
    default:
      throw InternalError("q_class: p = 1 mod 8 cannot satisfy ord_p(4) = (p-1)/2 (p=" +
                          std::to_string(p) + ")");
  }
}

u32 h_refined_mod_p(const modarith::PrimeModulus& pm, const modpseq::ModSeries& genocchi) {
  const u64 p = pm.p();
  if (p < 5) throw std::domain_error("h_refined_mod_p: requires p >= 5");
  check_series(genocchi, pm, modpseq::SeqKind::Genocchi);

  // prod = G_2 G_4 ... G_{p-3} * G_{p-1}, the last factor as 2*q_2(p).
  u64 prod = 1;
  for (std::size_t k = 1; k < genocchi.slots(); ++k) {
    prod = prod * genocchi.residues[k] % p;
    if (prod == 0) break;
  }
  prod = prod * modpseq::genocchi_pm1_mod_p(pm) % p;

  // (p-1)!! = 2*4*...*(p-1) mod p.
  u64 dfac = 1;
  for (u64 j = 2; j <= p - 1; j += 2) dfac = dfac * j % p;

  // 2^(2-p) with the exponent lifted mod p-1 (Fermat), times the sign.
  u64 exp = (2 + (p - 1) - (p % (p - 1))) % (p - 1);
  u64 val = modarith::pow_mod(2, exp, p);
  val = modarith::mul_mod(val, modarith::inv_mod(dfac, p), p);
  val = modarith::mul_mod(val, prod, p);
  if (((p - 1) / 2) % 2 == 1) val = (p - val) % p;
  return static_cast<u32>(val);
}

std::string to_jsonl(const PrimeRecord& rec) {
  nlohmann::ordered_json j;
  j["p"] = rec.p;
  j["residue_mod_8"] = rec.residue_mod_8;
  j["ord2"] = rec.ord2;
  j["ord4_is_half"] = rec.ord4_is_half;
  if (rec.b_irregular_indices)
    j["b_irregular_indices"] = *rec.b_irregular_indices;
  else
    j["b_irregular_indices"] = nullptr;
  if (rec.e_irregular_indices)
    j["e_irregular_indices"] = *rec.e_irregular_indices;
  else
    j["e_irregular_indices"] = nullptr;
  if (rec.g_irregular)
    j["g_irregular"] = *rec.g_irregular;
  else
    j["g_irregular"] = nullptr;
  if (rec.wieferich)
    j["wieferich"] = *rec.wieferich;
  else
    j["wieferich"] = nullptr;
  if (rec.h_refined_residue)
    j["h_refined_residue"] = *rec.h_refined_residue;
  else
    j["h_refined_residue"] = nullptr;
  return j.dump();
}

PrimeRecord record_from_jsonl(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  PrimeRecord rec;
  rec.p = j.at("p").get<u64>();
  rec.residue_mod_8 = j.at("residue_mod_8").get<unsigned>();
  rec.ord2 = j.at("ord2").get<u64>();
  rec.ord4_is_half = j.at("ord4_is_half").get<bool>();
  if (!j.at("b_irregular_indices").is_null())
    rec.b_irregular_indices = j.at("b_irregular_indices").get<std::vector<u64>>();
  if (!j.at("e_irregular_indices").is_null())
    rec.e_irregular_indices = j.at("e_irregular_indices").get<std::vector<u64>>();
  if (!j.at("g_irregular").is_null()) rec.g_irregular = j.at("g_irregular").get<bool>();
  if (!j.at("wieferich").is_null()) rec.wieferich = j.at("wieferich").get<bool>();
  if (!j.at("h_refined_residue").is_null())
    rec.h_refined_residue = j.at("h_refined_residue").get<u32>();
  return rec;
}

}  // namespace girr::classify
