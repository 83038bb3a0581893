#pragma once

// Truncated 2-adic numbers: 2^v * u with u an odd integer known modulo 2^k.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "normcomb/expr.hpp"
#include "normcomb/normlattice.hpp"
#include "normcomb/rational.hpp"
#include "normcomb/squareclass.hpp"

namespace normcomb {

class Dyadic {
public:
  static constexpr int kMaxPrecision = 64;
  static constexpr int kMinPrecision = 3;

  /// Exact zero.
  Dyadic() = default;
  /// 2^v * u at precision k; u must be odd.
  static Dyadic make(std::int64_t v, std::uint64_t u, int k = kMaxPrecision);
  static Dyadic from_rational(const Rational &q, int k = kMaxPrecision);

  bool is_zero() const { return zero_; }
  std::int64_t valuation() const { return v_; }
  std::uint64_t unit() const { return u_; }
  int precision() const { return k_; }

  /// "0", "2^3*1 [k=64]"
  std::string str() const;

  friend bool operator==(const Dyadic &, const Dyadic &) = default;

private:
  bool zero_ = true;
  std::int64_t v_ = 0;
  std::uint64_t u_ = 0;
  int k_ = kMaxPrecision;
};

enum class DyadicOp { Add, Mul, Inv, Neg };

Dyadic add(const Dyadic &a, const Dyadic &b);
Dyadic sub(const Dyadic &a, const Dyadic &b);
Dyadic mul(const Dyadic &a, const Dyadic &b);
Dyadic neg(const Dyadic &a);
Dyadic inv(const Dyadic &a);
Dyadic div(const Dyadic &a, const Dyadic &b);
/// Dispatcher; `b` is ignored for the unary operations.
Dyadic arith(DyadicOp op, const Dyadic &a, const Dyadic &b = Dyadic());

inline Dyadic operator+(const Dyadic &a, const Dyadic &b) { return add(a, b); }
inline Dyadic operator-(const Dyadic &a, const Dyadic &b) { return sub(a, b); }
inline Dyadic operator*(const Dyadic &a, const Dyadic &b) { return mul(a, b); }
inline Dyadic operator/(const Dyadic &a, const Dyadic &b) { return div(a, b); }
inline Dyadic operator-(const Dyadic &a) { return neg(a); }

bool is_square(const Dyadic &a);
SquareClass square_class_of(const Dyadic &a);

struct SearchBounds {
  int min_valuation = -4;
  int max_valuation = 4;
  int unit_bits = 8;
};

/// Classes (mask) of the nonzero values x^2 - a*y^2 found by bounded search.
std::uint8_t norm_classes_by_search(const Dyadic &a, const SearchBounds &bounds = {});
/// +1 iff b is found to be a norm from Q2(sqrt a) by bounded search.
int hilbert_search(const Dyadic &a, const Dyadic &b, const SearchBounds &bounds = {});
/// hilbert_search cross-checked against the lattice; throws OracleMismatch.
int hilbert_oracle(const Dyadic &a, const Dyadic &b,
                   const NormLattice &L = lattice(LatticeScenario::CaseA),
                   const SearchBounds &bounds = {});

/// Rational representative of each Case A class, indexed by class bits.
std::array<Rational, 8> class_representatives();

/// 8x8 matrices indexed by class bits.
struct HilbertComparison {
  std::array<std::array<int, 8>, 8> lattice{};
  std::array<std::array<int, 8>, 8> oracle{};
  bool equal() const { return lattice == oracle; }
};
HilbertComparison compare_hilbert(const NormLattice &L, const SearchBounds &bounds = {});

enum class Category { O1, O2Unit, O2NonUnit, MOnly, Outside };
std::string_view to_string(Category c);

/// Membership from the definitional predicates with T = even valuation.
Category classify_in_construction(const Dyadic &x);
/// The same classification read off the valuation directly.
Category classify_closed_form(const Dyadic &x);

/// Splittable deterministic generator (SplitMix64).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  SplitMix64 split() { return SplitMix64(next()); }

private:
  std::uint64_t state_;
};

Dyadic random_dyadic(SplitMix64 &rng, int min_v, int max_v, int k);

struct ConstructionReport {
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::map<Category, std::size_t> counts;
  int gamma_mod_2_order = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ConstructionReport verify_construction(std::size_t samples, std::uint64_t seed,
                                       int k = Dyadic::kMaxPrecision);

/// (e, f) of Q2(sqrt a)/Q2. Throws TrivialClass for a = 1.
std::pair<int, int> quad_ext_invariants(SquareClass a);

/// Evaluate an expression with rational coefficients at (x, y).
Dyadic evaluate(const Expr &e, const Dyadic &x, const Dyadic &y = Dyadic(),
                int k = Dyadic::kMaxPrecision);

struct ClassHypothesis {
  Expr expr;
  ClassSet allowed;
};

struct SampleResult {
  std::vector<std::array<Dyadic, 2>> tuples;
  std::size_t attempts = 0;
  bool unsatisfiable_at_budget = false;
};

/// Instantiations (x, y) whose classes satisfy every hypothesis. Small
/// integers are tried first, then random draws; `budget` bounds the number
/// of attempts (0 picks a default).
SampleResult sample_hypothesis(const std::vector<ClassHypothesis> &hyp,
                               std::size_t count, std::uint64_t seed,
                               int k = Dyadic::kMaxPrecision, std::size_t budget = 0);

} // namespace normcomb
