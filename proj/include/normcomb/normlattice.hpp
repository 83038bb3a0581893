#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "normcomb/squareclass.hpp"

namespace normcomb {

enum class LatticeScenario { CaseA, CaseBk, CaseBK };

std::string_view to_string(LatticeScenario s);
LatticeScenario parse_lattice_scenario(std::string_view text);

/// The map a -> N(a) from square classes to norm subgroups (mod squares).
class NormLattice {
public:
  NormLattice(LatticeScenario scenario, std::array<std::uint8_t, 8> groups);

  LatticeScenario scenario() const { return scenario_; }
  Basis basis() const {
    return scenario_ == LatticeScenario::CaseA ? Basis::CaseA : Basis::CaseB;
  }
  ClassGroup group() const { return ClassGroup(basis()); }

  /// N(a). N(1) is reported as the full group.
  ClassSet norm_group(SquareClass a) const;
  std::uint8_t mask(std::uint8_t bits) const { return groups_[bits & 7u]; }

  /// Flip membership of `member` in N(a); used by the mutation harness.
  NormLattice toggled(SquareClass a, SquareClass member) const;

  friend bool operator==(const NormLattice &, const NormLattice &) = default;

private:
  LatticeScenario scenario_;
  std::array<std::uint8_t, 8> groups_;
};

NormLattice lattice(LatticeScenario scenario);

struct LatticeReport {
  bool all_subgroups = false;
  bool reciprocity_holds = false;
  bool all_index_2 = false;
  bool injective = false;
  bool demushkin_consistent = false;
};

LatticeReport verify_lattice(const NormLattice &L);

struct SumRuleResult {
  ClassSet classes;
  bool may_vanish = false;
};

/// Possible classes of p+q given p ~ a, q ~ b: a*N(-ab), or everything when
/// b = -a (the sum may then be zero).
SumRuleResult sum_rule(const NormLattice &L, SquareClass a, SquareClass b);

/// +1 iff b in N(a); +1 whenever a or b is trivial.
int hilbert_from_lattice(const NormLattice &L, SquareClass a, SquareClass b);

} // namespace normcomb
