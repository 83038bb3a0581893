#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "normcomb/expr.hpp"
#include "normcomb/normlattice.hpp"
#include "normcomb/scalar.hpp"
#include "normcomb/squareclass.hpp"

namespace normcomb {

enum class ScenarioId {
  CaseA,
  CaseB3is1,
  CaseB3is2,
  /// Case B with the class of 3 (and c-3) left open.
  CaseBOpen,
};

std::string_view to_string(ScenarioId id);
ScenarioId parse_scenario(std::string_view text);

/// Precomputed set-level sum-rule and product tables for one lattice.
struct SumTables {
  std::array<std::array<std::uint8_t, 8>, 8> pair{};
  std::vector<std::uint8_t> sum;     // 256 x 256
  std::vector<std::uint8_t> product; // 256 x 256

  std::uint8_t set_sum(std::uint8_t a, std::uint8_t b) const {
    return sum[(std::size_t{a} << 8) | b];
  }
  std::uint8_t set_product(std::uint8_t a, std::uint8_t b) const {
    return product[(std::size_t{a} << 8) | b];
  }
  static std::shared_ptr<const SumTables> build(const NormLattice &L);
};

/// Lattice plus constant table. Case B uses the K lattice.
class Scenario {
public:
  explicit Scenario(ScenarioId id);
  Scenario(ScenarioId id, NormLattice lattice);

  ScenarioId id() const { return id_; }
  const NormLattice &lattice() const { return lattice_; }
  Basis basis() const { return lattice_.basis(); }
  const SumTables &tables() const { return *tables_; }

  /// Class of 3, if the scenario fixes it.
  std::optional<SquareClass> three() const;
  /// Class of c - t for t in 0..4, if known.
  std::optional<SquareClass> shifted_c(int t) const;

  /// Class of a nonzero scalar, or nullopt if the constant table cannot
  /// decide it. Throws ZeroScalar.
  std::optional<SquareClass> scalar_class(const Scalar &s) const;
  std::optional<SquareClass> ratio_class(const ScalarRatio &r) const;

private:
  std::optional<SquareClass> rational_class(const Rational &q) const;

  ScenarioId id_;
  NormLattice lattice_;
  std::shared_ptr<const SumTables> tables_;
};

/// One summand of a decomposition: coef * (product of 0..2 universe items).
struct DecompTerm {
  ScalarRatio coef;
  SquareClass coef_class;
  std::array<int, 2> factors{-1, -1};
  int nfactors = 0;
};

/// target = sum of the terms (one or two of them).
struct Decomposition {
  int target = -1;
  int nterms = 0;
  std::array<DecompTerm, 2> terms;
};

/// All decompositions available over a fixed list of expressions. Depends on
/// the constant table (through coefficient classes) but not on the lattice.
class DecompIndex {
public:
  DecompIndex(ScenarioId scenario, const std::vector<Expr> &universe);

  const std::vector<Decomposition> &decompositions() const { return decomps_; }
  /// Decompositions reading item i as a factor.
  const std::vector<int> &dependents(int i) const { return dependents_[i]; }

private:
  std::vector<Decomposition> decomps_;
  std::vector<std::vector<int>> dependents_;
};

/// Immutable expression list with its decomposition index.
struct Universe {
  ScenarioId scenario;
  AtomNames names;
  std::vector<Expr> exprs;
  std::shared_ptr<const DecompIndex> index;

  /// Shared across identical (scenario, names, exprs) lists.
  static std::shared_ptr<const Universe> get(ScenarioId scenario, const AtomNames &names,
                                             const std::vector<Expr> &exprs);
};

class KnowledgeBase {
public:
  explicit KnowledgeBase(Scenario scenario, AtomNames names = {});

  const Scenario &scenario() const { return scenario_; }
  const AtomNames &names() const { return names_; }

  /// Add an expression (or restrict an existing one). A missing set means
  /// the full group. Returns the index.
  int add(const Expr &e, std::optional<ClassSet> set = std::nullopt,
          const std::string &justification = "target");
  int add(std::string_view text, std::optional<ClassSet> set = std::nullopt,
          const std::string &justification = "target");
  int find(const Expr &e) const;
  int require(const Expr &e) const;

  std::size_t size() const { return exprs_.size(); }
  const Expr &expr(int i) const { return exprs_[i]; }
  ClassSet set(int i) const { return {scenario_.basis(), masks_[i]}; }
  /// Full group when the expression is not tracked.
  ClassSet set(const Expr &e) const;
  const std::string &justification(int i) const { return justify_[i]; }
  const std::vector<std::uint8_t> &masks() const { return masks_; }
  void set_masks(std::vector<std::uint8_t> masks);

  std::shared_ptr<const Universe> universe() const;

private:
  Scenario scenario_;
  AtomNames names_;
  std::vector<Expr> exprs_;
  std::vector<std::uint8_t> masks_;
  std::vector<std::string> justify_;
  mutable std::shared_ptr<const Universe> universe_;
};

/// Disjunction of "expr lies in set" alternatives.
struct Goal {
  struct Alt {
    int expr;
    std::uint8_t mask;
  };
  std::vector<Alt> alts;

  static Goal single(int expr, ClassSet set) { return Goal{{{expr, set.mask()}}}; }
  bool satisfied(const std::vector<std::uint8_t> &masks) const;
};

enum class Outcome { Proved, Stuck, Contradiction };
std::string_view to_string(Outcome o);

struct TraceStep;

struct SplitCase {
  std::uint8_t candidate = 0; // class bits
  Outcome outcome = Outcome::Stuck;
  std::vector<TraceStep> steps;
};

struct TraceStep {
  enum class Kind { Decompose, Refute, Split } kind = Kind::Decompose;
  int decomp = -1;          // Decompose
  int expr = -1;            // target of the step
  std::uint8_t result = 0;  // Decompose: set computed from the terms
  std::uint8_t before = 0;
  std::uint8_t after = 0;
  std::uint8_t candidate = 0; // Refute: class bits ruled out
  std::vector<TraceStep> steps; // Refute
  std::vector<SplitCase> cases; // Split
};

struct ProofTrace {
  std::shared_ptr<const Universe> universe;
  NormLattice norm_lattice = normcomb::lattice(LatticeScenario::CaseA);
  std::vector<std::uint8_t> initial;
  std::vector<std::string> justifications;
  Goal goal;
  Outcome outcome = Outcome::Stuck;
  std::vector<TraceStep> steps;
};

nlohmann::json to_json(const ProofTrace &trace);
nlohmann::json lattice_json(const NormLattice &L);

struct EngineOptions {
  /// Case-split depth for prove.
  int depth = 3;
  /// Failed-literal probing: 0 disables, 1 refutes a literal by propagation,
  /// n > 1 allows nested probing inside the refutation.
  int probe_depth = 1;
  /// When refining tables, refute literals with prove at this split depth.
  int refine_split_depth = 0;
  bool record_trace = true;
};

struct ProofResult {
  Outcome status = Outcome::Stuck;
  /// Candidate sets at the end: for split proofs, the union over the
  /// surviving branches.
  std::vector<std::uint8_t> masks;
  ProofTrace trace;

  ClassSet set(const KnowledgeBase &kb, int i) const {
    return {kb.scenario().basis(), masks[i]};
  }
};

/// Single pass of decompose_step on one target. Throws ContradictionFound on
/// an empty intersection.
ClassSet decompose_step(const KnowledgeBase &kb, const Expr &target);

/// Run decompositions to the fixpoint. Throws ContradictionFound.
KnowledgeBase propagate(const KnowledgeBase &kb, const std::vector<Expr> &targets = {});

/// Propagate, then refute single literals until nothing changes. The status
/// is Contradiction if the knowledge base is inconsistent, otherwise Stuck
/// (there is no goal).
ProofResult refine(const KnowledgeBase &kb, const EngineOptions &opts = {});

/// Prove that some goal alternative holds, splitting up to opts.depth.
/// Contradiction means every branch is impossible (inconsistent hypotheses).
ProofResult prove(const KnowledgeBase &kb, const Goal &goal, const EngineOptions &opts = {});
ProofResult prove(const KnowledgeBase &kb, const Expr &target, ClassSet goal,
                  const EngineOptions &opts = {});

/// New knowledge base over the atom var' = -a*var/(1+a*var), carrying the
/// classes of var' and 1+var'. Throws MissingFact.
KnowledgeBase substitute_transform(const KnowledgeBase &kb, const Scalar &a, int slot = 0);

} // namespace normcomb
