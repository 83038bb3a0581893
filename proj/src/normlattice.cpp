#include "normcomb/normlattice.hpp"

#include <bit>
#include <set>

namespace normcomb {

namespace {

constexpr std::uint8_t bit(unsigned i) { return static_cast<std::uint8_t>(1u << i); }

// Class indices: 0:1 1:-1 2:2 3:-2 4:g 5:-g 6:2g 7:-2g with g = 5 or c.
constexpr std::array<std::uint8_t, 8> kCaseA = {
    0xFF,                               // N(1)
    bit(0) | bit(2) | bit(4) | bit(6),  // N(-1)   = <2,5>
    bit(0) | bit(1) | bit(2) | bit(3),  // N(2)    = <-1,2>
    bit(0) | bit(2) | bit(5) | bit(7),  // N(-2)   = <2,-5>
    bit(0) | bit(1) | bit(4) | bit(5),  // N(5)    = <-1,5>
    bit(0) | bit(3) | bit(4) | bit(7),  // N(-5)   = <-2,5>
    bit(0) | bit(1) | bit(6) | bit(7),  // N(10)   = <-1,10>
    bit(0) | bit(3) | bit(5) | bit(6),  // N(-10)  = <-2,-5>
};

constexpr std::array<std::uint8_t, 8> kCaseBk = {
    0xFF,
    bit(0) | bit(2) | bit(4) | bit(6),  // N(-1)  = <2,c>
    bit(0) | bit(1) | bit(2) | bit(3),  // N(2)   = <-1,2>
    bit(0) | bit(2),                    // N(-2)  = <2>
    bit(0) | bit(1) | bit(4) | bit(5),  // N(c)   = <-1,c>
    bit(0) | bit(4),                    // N(-c)  = <c>
    bit(0) | bit(1) | bit(6) | bit(7),  // N(2c)  = <-1,2c>
    bit(0) | bit(6),                    // N(-2c) = <2c>
};

constexpr std::array<std::uint8_t, 8> kCaseBK = {
    0xFF,
    bit(0) | bit(2) | bit(4) | bit(6),
    bit(0) | bit(1) | bit(2) | bit(3),
    bit(0) | bit(2) | bit(5) | bit(7),  // N(-2)  = <2,-c>
    bit(0) | bit(1) | bit(4) | bit(5),
    bit(0) | bit(3) | bit(4) | bit(7),  // N(-c)  = <c,-2>
    bit(0) | bit(1) | bit(6) | bit(7),
    bit(0) | bit(3) | bit(5) | bit(6),  // N(-2c) = <2c,-2>
};

} // namespace

std::string_view to_string(LatticeScenario s) {
  switch (s) {
  case LatticeScenario::CaseA: return "case-a";
  case LatticeScenario::CaseBk: return "case-b-k";
  case LatticeScenario::CaseBK: return "case-b-K";
  }
  return "?";
}

LatticeScenario parse_lattice_scenario(std::string_view text) {
  if (text == "case-a") return LatticeScenario::CaseA;
  if (text == "case-b-k") return LatticeScenario::CaseBk;
  if (text == "case-b-K") return LatticeScenario::CaseBK;
  throw Error(ErrorKind::InvalidArgument,
              "unknown lattice scenario '" + std::string(text) + "'");
}

NormLattice::NormLattice(LatticeScenario scenario,
                         std::array<std::uint8_t, 8> groups)
    : scenario_(scenario), groups_(groups) {
  groups_[0] = 0xFF;
}

ClassSet NormLattice::norm_group(SquareClass a) const {
  if (a.basis() != basis())
    throw Error(ErrorKind::MixedGroups, "class does not belong to lattice");
  return {basis(), groups_[a.bits()]};
}

NormLattice NormLattice::toggled(SquareClass a, SquareClass member) const {
  auto groups = groups_;
  groups[a.bits()] ^= static_cast<std::uint8_t>(1u << member.bits());
  return NormLattice(scenario_, groups);
}

NormLattice lattice(LatticeScenario scenario) {
  switch (scenario) {
  case LatticeScenario::CaseA: return {scenario, kCaseA};
  case LatticeScenario::CaseBk: return {scenario, kCaseBk};
  case LatticeScenario::CaseBK: return {scenario, kCaseBK};
  }
  throw Error(ErrorKind::InvalidArgument, "bad lattice scenario");
}

LatticeReport verify_lattice(const NormLattice &L) {
  LatticeReport r;
  r.all_subgroups = true;
  r.all_index_2 = true;
  r.reciprocity_holds = true;
  std::set<std::uint8_t> seen;
  for (std::uint8_t a = 1; a < 8; ++a) {
    const std::uint8_t m = L.mask(a);
    if (!(m & 1u) || mask_product(m, m) != m)
      r.all_subgroups = false;
    if (std::popcount(m) != 4)
      r.all_index_2 = false;
    seen.insert(m);
    for (std::uint8_t b = 1; b < 8; ++b) {
      const bool b_in_a = (m >> b) & 1u;
      const bool a_in_b = (L.mask(b) >> a) & 1u;
      if (b_in_a != a_in_b)
        r.reciprocity_holds = false;
    }
  }
  r.injective = seen.size() == 7;
  r.demushkin_consistent = r.all_index_2 && r.injective && r.reciprocity_holds;
  return r;
}

SumRuleResult sum_rule(const NormLattice &L, SquareClass a, SquareClass b) {
  const SquareClass minus_ab = SquareClass::minus_one(a.basis()) * a * b;
  if (minus_ab.is_one())
    return {ClassSet::full(L.basis()), true};
  return {coset(a, L.norm_group(minus_ab)), false};
}

int hilbert_from_lattice(const NormLattice &L, SquareClass a, SquareClass b) {
  if (a.basis() != L.basis() || b.basis() != L.basis())
    throw Error(ErrorKind::MixedGroups, "class does not belong to lattice");
  if (a.is_one() || b.is_one())
    return 1;
  return L.norm_group(a).contains(b) ? 1 : -1;
}

} // namespace normcomb
