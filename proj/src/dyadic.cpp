#include "normcomb/dyadic.hpp"

#include <bit>
#include <limits>
#include <set>
#include <sstream>

#include "normcomb/error.hpp"

namespace normcomb {

namespace {

std::uint64_t low_mask(int k) {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

std::uint64_t inverse_mod_2_64(std::uint64_t u) {
  // u*u == 1 mod 8, so u is its own inverse to 3 bits; each Newton step
  // doubles the number of correct bits.
  std::uint64_t x = u;
  for (int i = 0; i < 6; ++i)
    x *= 2 - u * x;
  return x;
}

[[noreturn]] void exhausted(const char *what) {
  throw Error(ErrorKind::PrecisionExhausted, what);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorKind::Overflow, "valuation overflow");
  return r;
}

} // namespace

Dyadic Dyadic::make(std::int64_t v, std::uint64_t u, int k) {
  if (k < kMinPrecision)
    exhausted("fewer than 3 unit bits");
  if (k > kMaxPrecision)
    throw Error(ErrorKind::InvalidArgument, "precision above 64 bits");
  if ((u & 1u) == 0)
    throw Error(ErrorKind::InvalidArgument, "dyadic unit must be odd");
  Dyadic d;
  d.zero_ = false;
  d.v_ = v;
  d.u_ = u & low_mask(k);
  d.k_ = k;
  return d;
}

Dyadic Dyadic::from_rational(const Rational &q, int k) {
  if (q.is_zero())
    return Dyadic();
  std::int64_t n = q.num();
  std::int64_t d = q.den();
  const int tn = std::countr_zero(static_cast<std::uint64_t>(n));
  const int td = std::countr_zero(static_cast<std::uint64_t>(d));
  n >>= tn; // arithmetic shift keeps the sign; n stays odd
  d >>= td;
  const std::uint64_t u =
      static_cast<std::uint64_t>(n) * inverse_mod_2_64(static_cast<std::uint64_t>(d));
  return make(tn - td, u, k);
}

std::string Dyadic::str() const {
  if (zero_)
    return "0";
  std::ostringstream os;
  os << "2^" << v_ << "*" << u_ << " [k=" << k_ << "]";
  return os.str();
}

Dyadic add(const Dyadic &a0, const Dyadic &b0) {
  if (a0.is_zero())
    return b0;
  if (b0.is_zero())
    return a0;
  const Dyadic &a = a0.valuation() <= b0.valuation() ? a0 : b0;
  const Dyadic &b = a0.valuation() <= b0.valuation() ? b0 : a0;
  const std::int64_t d = b.valuation() - a.valuation();
  // Value of a is known mod 2^(va+ka), b mod 2^(vb+kb); relative to 2^va the
  // sum is known to min(ka, d+kb) bits.
  const std::int64_t known =
      std::min<std::int64_t>(a.precision(), d + b.precision());
  const int kk = static_cast<int>(std::min<std::int64_t>(known, Dyadic::kMaxPrecision));
  const std::uint64_t shifted = d >= 64 ? 0 : (b.unit() << d);
  const std::uint64_t s = (a.unit() + shifted) & low_mask(kk);
  if (s == 0)
    exhausted("sum cancels every retained bit");
  const int t = std::countr_zero(s);
  if (kk - t < Dyadic::kMinPrecision)
    exhausted("fewer than 3 unit bits remain after cancellation");
  return Dyadic::make(checked_add(a.valuation(), t), s >> t, kk - t);
}

Dyadic neg(const Dyadic &a) {
  if (a.is_zero())
    return a;
  return Dyadic::make(a.valuation(), ~a.unit() + 1, a.precision());
}

Dyadic sub(const Dyadic &a, const Dyadic &b) { return add(a, neg(b)); }

Dyadic mul(const Dyadic &a, const Dyadic &b) {
  if (a.is_zero() || b.is_zero())
    return Dyadic();
  const int k = std::min(a.precision(), b.precision());
  return Dyadic::make(checked_add(a.valuation(), b.valuation()), a.unit() * b.unit(), k);
}

Dyadic inv(const Dyadic &a) {
  if (a.is_zero())
    throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (a.valuation() == std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorKind::Overflow, "valuation overflow");
  return Dyadic::make(-a.valuation(), inverse_mod_2_64(a.unit()), a.precision());
}

Dyadic div(const Dyadic &a, const Dyadic &b) { return mul(a, inv(b)); }

Dyadic arith(DyadicOp op, const Dyadic &a, const Dyadic &b) {
  switch (op) {
  case DyadicOp::Add:
    return add(a, b);
  case DyadicOp::Mul:
    return mul(a, b);
  case DyadicOp::Inv:
    return inv(a);
  case DyadicOp::Neg:
    return neg(a);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown dyadic operation");
}

bool is_square(const Dyadic &a) {
  if (a.is_zero())
    throw Error(ErrorKind::ZeroScalar, "zero has no square class");
  if (a.precision() < Dyadic::kMinPrecision)
    exhausted("fewer than 3 unit bits");
  return (a.valuation() % 2 == 0) && (a.unit() & 7u) == 1;
}

SquareClass square_class_of(const Dyadic &a) {
  if (a.is_zero())
    throw Error(ErrorKind::ZeroScalar, "zero has no square class");
  if (a.precision() < Dyadic::kMinPrecision)
    exhausted("fewer than 3 unit bits");
  // bit0: -1, bit1: 2, bit2: 5
  static constexpr std::uint8_t by_residue[8] = {0, 0, 0, 5, 0, 4, 0, 1};
  std::uint8_t bits = by_residue[a.unit() & 7u];
  if (a.valuation() % 2 != 0)
    bits |= 2u;
  return SquareClass(Basis::CaseA, bits);
}

std::uint8_t norm_classes_by_search(const Dyadic &a, const SearchBounds &bounds) {
  std::vector<Dyadic> candidates{Dyadic()};
  const std::uint64_t units = std::uint64_t{1} << bounds.unit_bits;
  for (int v = bounds.min_valuation; v <= bounds.max_valuation; ++v)
    for (std::uint64_t u = 1; u < units; u += 2)
      candidates.push_back(Dyadic::make(v, u, a.precision()));
  std::vector<Dyadic> squares, scaled;
  squares.reserve(candidates.size());
  for (const auto &c : candidates) {
    squares.push_back(c * c);
    scaled.push_back(a * squares.back());
  }
  std::uint8_t found = 0;
  for (std::size_t i = 0; i < squares.size(); ++i) {
    for (std::size_t j = 0; j < scaled.size(); ++j) {
      if (i == 0 && j == 0)
        continue;
      try {
        const Dyadic n = squares[i] - scaled[j];
        if (n.is_zero())
          continue;
        found |= static_cast<std::uint8_t>(1u << square_class_of(n).bits());
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::PrecisionExhausted)
          throw;
      }
      if (found == 0xFF)
        return found;
    }
  }
  return found;
}

int hilbert_search(const Dyadic &a, const Dyadic &b, const SearchBounds &bounds) {
  const std::uint8_t norms = norm_classes_by_search(a, bounds);
  return (norms >> square_class_of(b).bits()) & 1u ? 1 : -1;
}

int hilbert_oracle(const Dyadic &a, const Dyadic &b, const NormLattice &L,
                   const SearchBounds &bounds) {
  const int searched = hilbert_search(a, b, bounds);
  const int expected = hilbert_from_lattice(L, square_class_of(a), square_class_of(b));
  if (searched != expected)
    throw Error(ErrorKind::OracleMismatch,
                "Hilbert symbol (" + square_class_of(a).label() + ", " +
                    square_class_of(b).label() + "): search gives " +
                    std::to_string(searched) + ", lattice gives " +
                    std::to_string(expected));
  return searched;
}

std::array<Rational, 8> class_representatives() {
  return {Rational(1), Rational(-1), Rational(2), Rational(-2),
          Rational(5), Rational(-5), Rational(10), Rational(-10)};
}

HilbertComparison compare_hilbert(const NormLattice &L, const SearchBounds &bounds) {
  HilbertComparison out;
  const auto reps = class_representatives();
  for (int i = 0; i < 8; ++i) {
    const Dyadic a = Dyadic::from_rational(reps[i]);
    const std::uint8_t norms = norm_classes_by_search(a, bounds);
    for (int j = 0; j < 8; ++j) {
      out.oracle[i][j] = (norms >> j) & 1u ? 1 : -1;
      out.lattice[i][j] = hilbert_from_lattice(L, SquareClass(L.basis(), i),
                                               SquareClass(L.basis(), j));
    }
  }
  return out;
}

std::string_view to_string(Category c) {
  switch (c) {
  case Category::O1:
    return "O1";
  case Category::O2Unit:
    return "O2-unit";
  case Category::O2NonUnit:
    return "O2-nonunit";
  case Category::MOnly:
    return "M-only";
  case Category::Outside:
    return "outside";
  }
  return "?";
}

namespace {

bool in_T(const Dyadic &z) { return !z.is_zero() && z.valuation() % 2 == 0; }

bool in_O1(const Dyadic &z) {
  if (z.is_zero())
    return true;
  return !in_T(z) && in_T(Dyadic::from_rational(1, z.precision()) + z);
}

// The probes only need one element of O1 with v = 1: if z has negative even
// valuation then z*2 falls outside O1.
bool in_O2(const Dyadic &z) {
  if (!in_T(z))
    return false;
  for (const std::int64_t p : {2, 6, 10, -2, 8})
    if (!in_O1(z * Dyadic::from_rational(p, z.precision())))
      return false;
  return true;
}

bool in_O(const Dyadic &z) { return in_O1(z) || in_O2(z); }

bool is_unit(const Dyadic &z) { return !z.is_zero() && in_O(z) && in_O(inv(z)); }

bool in_M(const Dyadic &z) { return in_O(z) && !is_unit(z); }

} // namespace

Category classify_in_construction(const Dyadic &x) {
  if (x.is_zero())
    throw Error(ErrorKind::ZeroScalar, "classification of zero");
  if (in_O1(x))
    return Category::O1;
  if (in_O2(x))
    return is_unit(x) ? Category::O2Unit : Category::O2NonUnit;
  if (in_M(x))
    return Category::MOnly;
  return Category::Outside;
}

Category classify_closed_form(const Dyadic &x) {
  if (x.is_zero())
    throw Error(ErrorKind::ZeroScalar, "classification of zero");
  const std::int64_t v = x.valuation();
  if (v > 0 && v % 2 != 0)
    return Category::O1;
  if (v >= 0 && v % 2 == 0)
    return v == 0 ? Category::O2Unit : Category::O2NonUnit;
  return Category::Outside;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

Dyadic random_dyadic(SplitMix64 &rng, int min_v, int max_v, int k) {
  const std::int64_t v = rng.uniform(min_v, max_v);
  return Dyadic::make(v, rng.next() | 1u, k);
}

ConstructionReport verify_construction(std::size_t samples, std::uint64_t seed, int k) {
  ConstructionReport report;
  report.samples = samples;
  if (samples == 0)
    return report;
  SplitMix64 rng(seed);
  std::vector<Dyadic> xs;
  xs.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i)
    xs.push_back(random_dyadic(rng, -8, 8, k));

  auto violate = [&](const std::string &what, const Dyadic &x) {
    if (report.violations.size() < 100)
      report.violations.push_back(what + " at x = " + x.str());
  };
  const Dyadic two = Dyadic::from_rational(2, k);
  const Dyadic one = Dyadic::from_rational(1, k);
  std::set<bool> gamma_classes;

  for (std::size_t i = 0; i < samples; ++i) {
    const Dyadic &x = xs[i];
    const Dyadic &y = xs[(i + 1) % samples];
    try {
      const Category cat = classify_in_construction(x);
      ++report.counts[cat];
      if (cat != classify_closed_form(x))
        violate("definitional and closed-form classification differ", x);
      gamma_classes.insert(in_T(x));
      if (!in_T(x) && !in_T(y) && !in_T(x * y))
        violate("product of two odd-valuation elements is not in T", x);

      const bool xo = in_O(x), yo = in_O(y);
      if (xo && yo) {
        if (!in_O(x * y))
          violate("O not closed under multiplication", x);
        const Dyadic s = x + y;
        if (!s.is_zero() && !in_O(s))
          violate("O not closed under addition", x);
      }
      if (is_unit(x) && !in_O2(x))
        violate("unit outside O2", x);
      if (in_O1(x) && in_O1(y) && !in_O2(x * y))
        violate("O1*O1 not inside O2", x);

      const bool m_def = in_M(x);
      const bool m_union = in_O1(x) || in_O1(x / two);
      if (m_def != m_union)
        violate("M differs from O1 union 2*O1", x);
      if (m_def && yo && !in_M(x * y))
        violate("M not an ideal (product)", x);
      if (m_def && in_M(y)) {
        const Dyadic s = x + y;
        if (!s.is_zero() && !in_M(s))
          violate("M not an ideal (sum)", x);
      }
      if (is_unit(x) && !in_M(one + x))
        violate("unit x with 1+x not in M (residue field larger than F2)", x);
      if (m_def && in_M(two / x))
        violate("element with 0 < v(x) < v(2)", x);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::PrecisionExhausted)
        throw;
      ++report.skipped;
    }
  }
  report.gamma_mod_2_order = static_cast<int>(gamma_classes.size());
  if (report.gamma_mod_2_order > 2)
    report.violations.push_back("value group modulo 2 has more than two classes");
  return report;
}

std::pair<int, int> quad_ext_invariants(SquareClass a) {
  if (a.is_one())
    throw Error(ErrorKind::TrivialClass, "Q2(sqrt 1) is not a quadratic extension");
  if (a == SquareClass::generator(Basis::CaseA))
    return {1, 2};
  return {2, 1};
}

Dyadic evaluate(const Expr &e, const Dyadic &x, const Dyadic &y, int k) {
  Dyadic acc;
  const Dyadic mono[Expr::kMonomials] = {Dyadic::from_rational(1, k), x, y, x * y};
  for (int m = 0; m < Expr::kMonomials; ++m) {
    const Scalar &s = e.coeff(m);
    if (s.is_zero())
      continue;
    if (!s.is_rational())
      throw Error(ErrorKind::InvalidArgument,
                  "cannot evaluate a coefficient involving c in Q2");
    acc = acc + Dyadic::from_rational(s.coeff(0), k) * mono[m];
  }
  return acc;
}

namespace {

bool satisfies(const std::vector<const ClassHypothesis *> &hyp, const Dyadic &x,
               const Dyadic &y, int k) {
  try {
    for (const auto *h : hyp) {
      const Dyadic val = evaluate(h->expr, x, y, k);
      if (val.is_zero() || !h->allowed.contains(square_class_of(val)))
        return false;
    }
    return true;
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::PrecisionExhausted)
      throw;
    return false;
  }
}

// Candidate values for one atom: small integers first, then random draws.
std::vector<Dyadic> atom_candidates(const std::vector<const ClassHypothesis *> &hyp,
                                    int slot, std::size_t want, SplitMix64 &rng,
                                    int k, std::size_t budget, std::size_t &attempts) {
  std::vector<Dyadic> out;
  auto test = [&](const Dyadic &d) {
    ++attempts;
    const bool ok = slot == 0 ? satisfies(hyp, d, Dyadic(), k)
                              : satisfies(hyp, Dyadic(), d, k);
    if (ok)
      out.push_back(d);
  };
  for (std::int64_t n = 1; n <= 256 && out.size() < want; ++n) {
    test(Dyadic::from_rational(n, k));
    if (out.size() < want)
      test(Dyadic::from_rational(-n, k));
  }
  std::size_t used = 0;
  while (out.size() < want && used++ < budget)
    test(random_dyadic(rng, -6, 10, k));
  return out;
}

} // namespace

SampleResult sample_hypothesis(const std::vector<ClassHypothesis> &hyp,
                               std::size_t count, std::uint64_t seed, int k,
                               std::size_t budget) {
  SampleResult result;
  if (budget == 0)
    budget = std::max<std::size_t>(50000, 400 * count);
  std::vector<const ClassHypothesis *> xs, ys, joint;
  unsigned support = 0;
  for (const auto &h : hyp) {
    const unsigned s = h.expr.support();
    support |= s;
    (s == 1 ? xs : s == 2 ? ys : joint).push_back(&h);
  }
  SplitMix64 rng(seed);
  SplitMix64 xrng = rng.split();
  SplitMix64 yrng = rng.split();
  const std::vector<Dyadic> xc =
      atom_candidates(xs, 0, count, xrng, k, budget, result.attempts);
  std::vector<Dyadic> yc{Dyadic()};
  if (support & 2u)
    yc = atom_candidates(ys, 1, count, yrng, k, budget, result.attempts);

  if (!xc.empty() && !yc.empty()) {
    const std::size_t nx = xc.size(), ny = yc.size();
    for (std::size_t t = 0; t < budget && result.tuples.size() < count; ++t) {
      const Dyadic &x = xc[t % nx];
      const Dyadic &y = yc[(t * 7 + t / nx) % ny];
      ++result.attempts;
      if (satisfies(joint, x, y, k))
        result.tuples.push_back({x, y});
    }
  }
  result.unsatisfiable_at_budget = result.tuples.empty() && count > 0;
  return result;
}

} // namespace normcomb
