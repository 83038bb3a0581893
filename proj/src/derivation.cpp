#include "normcomb/derivation.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <mutex>

#include "normcomb/dyadic.hpp"
#include "normcomb/error.hpp"
#include "normcomb/poly.hpp"

namespace normcomb {

std::string_view to_string(ScenarioId id) {
  switch (id) {
  case ScenarioId::CaseA:
    return "case-a";
  case ScenarioId::CaseB3is1:
    return "case-b-3is1";
  case ScenarioId::CaseB3is2:
    return "case-b-3is2";
  case ScenarioId::CaseBOpen:
    return "case-b-open";
  }
  return "?";
}

ScenarioId parse_scenario(std::string_view text) {
  for (auto id : {ScenarioId::CaseA, ScenarioId::CaseB3is1, ScenarioId::CaseB3is2,
                  ScenarioId::CaseBOpen})
    if (text == to_string(id))
      return id;
  throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + std::string(text) + "'");
}

std::shared_ptr<const SumTables> SumTables::build(const NormLattice &L) {
  auto t = std::make_shared<SumTables>();
  const Basis basis = L.basis();
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      t->pair[a][b] =
          sum_rule(L, SquareClass(basis, a), SquareClass(basis, b)).classes.mask();
  // row[a][m] = union over b in m of pair[a][b]
  std::array<std::array<std::uint8_t, 256>, 8> row{};
  for (int a = 0; a < 8; ++a)
    for (int m = 1; m < 256; ++m) {
      const int b = std::countr_zero(static_cast<unsigned>(m));
      row[a][m] = row[a][m & (m - 1)] | t->pair[a][b];
    }
  t->sum.assign(65536, 0);
  t->product.assign(65536, 0);
  for (int m1 = 1; m1 < 256; ++m1) {
    const int a = std::countr_zero(static_cast<unsigned>(m1));
    const int rest = m1 & (m1 - 1);
    for (int m2 = 0; m2 < 256; ++m2) {
      const std::size_t k = (std::size_t(m1) << 8) | m2;
      t->sum[k] = t->sum[(std::size_t(rest) << 8) | m2] | row[a][m2];
      t->product[k] = mask_product(static_cast<std::uint8_t>(m1),
                                   static_cast<std::uint8_t>(m2));
    }
  }
  return t;
}

namespace {

NormLattice default_lattice(ScenarioId id) {
  return lattice(id == ScenarioId::CaseA ? LatticeScenario::CaseA
                                         : LatticeScenario::CaseBK);
}

// coset_table[bits][mask]
const std::array<std::array<std::uint8_t, 256>, 8> &coset_table() {
  static const auto table = [] {
    std::array<std::array<std::uint8_t, 256>, 8> t{};
    for (int b = 0; b < 8; ++b)
      for (int m = 0; m < 256; ++m)
        t[b][m] = mask_coset(static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(m));
    return t;
  }();
  return table;
}

} // namespace

Scenario::Scenario(ScenarioId id) : Scenario(id, default_lattice(id)) {}

Scenario::Scenario(ScenarioId id, NormLattice lattice)
    : id_(id), lattice_(std::move(lattice)), tables_(SumTables::build(lattice_)) {
  if ((id == ScenarioId::CaseA) != (lattice_.basis() == Basis::CaseA))
    throw Error(ErrorKind::MixedGroups, "scenario and lattice use different bases");
}

std::optional<SquareClass> Scenario::three() const {
  switch (id_) {
  case ScenarioId::CaseA:
    return SquareClass(Basis::CaseA, 5); // -5
  case ScenarioId::CaseB3is1:
    return SquareClass::one(Basis::CaseB);
  case ScenarioId::CaseB3is2:
    return SquareClass::two(Basis::CaseB);
  case ScenarioId::CaseBOpen:
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<SquareClass> Scenario::shifted_c(int t) const {
  if (id_ == ScenarioId::CaseA)
    return std::nullopt;
  const Basis B = Basis::CaseB;
  switch (t) {
  case 0:
    return SquareClass::generator(B); // c
  case 1:
    return SquareClass::one(B);
  case 2:
    return SquareClass(B, 3); // -2
  case 3:
    if (id_ == ScenarioId::CaseB3is2)
      return SquareClass(B, 3); // -2
    if (id_ == ScenarioId::CaseB3is1)
      return SquareClass::minus_one(B);
    return std::nullopt;
  case 4:
    return SquareClass::minus_one(B);
  default:
    return std::nullopt;
  }
}

std::optional<SquareClass> Scenario::rational_class(const Rational &q) const {
  if (q.is_zero())
    throw Error(ErrorKind::ZeroScalar, "zero has no square class");
  if (id_ == ScenarioId::CaseA)
    return square_class_of(Dyadic::from_rational(q));
  // Case B: only +-2^a 3^b is covered by the constant table.
  std::uint8_t bits = q.sign() < 0 ? 1 : 0;
  int threes = 0;
  for (std::int64_t part : {q.num(), q.den()}) {
    std::uint64_t n = part < 0 ? 0 - static_cast<std::uint64_t>(part)
                               : static_cast<std::uint64_t>(part);
    const int twos = std::countr_zero(n);
    n >>= twos;
    bits ^= (twos & 1) ? 2 : 0;
    while (n % 3 == 0) {
      n /= 3;
      ++threes;
    }
    if (n != 1)
      return std::nullopt;
  }
  SquareClass cls(Basis::CaseB, bits);
  if (threes % 2 != 0) {
    const auto t = three();
    if (!t)
      return std::nullopt;
    cls = cls * *t;
  }
  return cls;
}

std::optional<SquareClass> Scenario::scalar_class(const Scalar &s0) const {
  if (s0.is_zero())
    throw Error(ErrorKind::ZeroScalar, "zero has no square class");
  if (id_ == ScenarioId::CaseA)
    return s0.is_rational() ? rational_class(s0.coeff(0)) : std::nullopt;
  Scalar s = s0;
  SquareClass cls = SquareClass::one(Basis::CaseB);
  for (int t = 0; t <= 4 && s.degree() > 0; ++t) {
    const Scalar factor = Scalar::linear(Rational(-t), Rational(1));
    for (;;) {
      if (s.degree() < 1)
        break;
      auto [quot, rem] = divmod(s, factor);
      if (!rem.is_zero())
        break;
      const auto fc = shifted_c(t);
      if (!fc)
        return std::nullopt;
      cls = cls * *fc;
      s = quot;
    }
  }
  if (s.degree() > 0)
    return std::nullopt;
  const auto rc = rational_class(s.coeff(0));
  if (!rc)
    return std::nullopt;
  return cls * *rc;
}

std::optional<SquareClass> Scenario::ratio_class(const ScalarRatio &r) const {
  const auto n = scalar_class(r.num);
  const auto d = scalar_class(r.den);
  if (!n || !d)
    return std::nullopt;
  return *n * *d;
}

// ---------------------------------------------------------------------------
// Decomposition index

namespace {

unsigned monomial_pattern(const Expr &e) {
  unsigned p = 0;
  for (int m = 0; m < Expr::kMonomials; ++m)
    if (!e.coeff(m).is_zero())
      p |= 1u << m;
  return p;
}

struct PoolEntry {
  Expr value;
  std::array<int, 2> factors{-1, -1};
  int nfactors = 0;
  unsigned support = 0;
  unsigned pattern = 0;
};

} // namespace

DecompIndex::DecompIndex(ScenarioId scenario, const std::vector<Expr> &universe) {
  const Scenario sc(scenario);
  const int n = static_cast<int>(universe.size());
  dependents_.assign(n, {});

  std::vector<PoolEntry> pool;
  pool.push_back({Expr::constant(Scalar(1)), {-1, -1}, 0, 0, 1u});
  for (int i = 0; i < n; ++i)
    pool.push_back({universe[i], {i, -1}, 1, universe[i].support(),
                    monomial_pattern(universe[i])});
  const std::size_t singles_end = pool.size();
  for (int i = 0; i < n; ++i) {
    if (universe[i].support() != 1u)
      continue;
    for (int j = 0; j < n; ++j) {
      if (universe[j].support() != 2u)
        continue;
      auto prod = universe[i].times(universe[j]);
      if (!prod)
        continue;
      pool.push_back({*prod, {i, j}, 2, 3u, monomial_pattern(*prod)});
    }
  }

  auto make_term = [&](const PoolEntry &p, const ScalarRatio &coef,
                       SquareClass cls) {
    DecompTerm t;
    t.coef = coef;
    t.coef_class = cls;
    t.factors = p.factors;
    t.nfactors = p.nfactors;
    return t;
  };

  for (int t = 0; t < n; ++t) {
    const Expr &T = universe[t];
    const unsigned st = T.support();
    const unsigned tp = monomial_pattern(T);
    std::vector<const PoolEntry *> cand;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      const PoolEntry &e = pool[p];
      if (p >= 1 && p < singles_end && e.factors[0] == t)
        continue;
      if (p >= singles_end && st != 3u)
        continue;
      if ((e.support & ~st) != 0)
        continue;
      cand.push_back(&e);
    }

    // Single proportional terms: T = u * P.
    for (const PoolEntry *p : cand) {
      if (p->pattern != tp)
        continue;
      int r = std::countr_zero(tp);
      bool ok = true;
      for (int m = 0; m < Expr::kMonomials && ok; ++m)
        ok = T.coeff(m) * p->value.coeff(r) == T.coeff(r) * p->value.coeff(m);
      if (!ok)
        continue;
      const ScalarRatio u = ScalarRatio::make(T.coeff(r), p->value.coeff(r));
      const auto cls = sc.ratio_class(u);
      if (!cls)
        continue;
      Decomposition d;
      d.target = t;
      d.nterms = 1;
      d.terms[0] = make_term(*p, u, *cls);
      decomps_.push_back(d);
    }

    // Pairs: T = u*P1 + v*P2.
    for (std::size_t a = 0; a < cand.size(); ++a) {
      for (std::size_t b = a + 1; b < cand.size(); ++b) {
        const Expr &P = cand[a]->value;
        const Expr &Q = cand[b]->value;
        if ((tp & ~(cand[a]->pattern | cand[b]->pattern)) != 0)
          continue;
        Scalar D;
        int r = -1, s = -1;
        for (int i = 0; i < Expr::kMonomials && r < 0; ++i)
          for (int j = i + 1; j < Expr::kMonomials; ++j) {
            if (P.coeff(i).is_zero() && Q.coeff(i).is_zero())
              break;
            Scalar det = P.coeff(i) * Q.coeff(j) - P.coeff(j) * Q.coeff(i);
            if (!det.is_zero()) {
              D = std::move(det);
              r = i;
              s = j;
              break;
            }
          }
        if (r < 0)
          continue; // parallel
        const Scalar unum = T.coeff(r) * Q.coeff(s) - T.coeff(s) * Q.coeff(r);
        const Scalar vnum = P.coeff(r) * T.coeff(s) - P.coeff(s) * T.coeff(r);
        if (unum.is_zero() || vnum.is_zero())
          continue;
        bool ok = true;
        for (int m = 0; m < Expr::kMonomials && ok; ++m)
          ok = T.coeff(m) * D == unum * P.coeff(m) + vnum * Q.coeff(m);
        if (!ok)
          continue;
        const ScalarRatio u = ScalarRatio::make(unum, D);
        const ScalarRatio v = ScalarRatio::make(vnum, D);
        const auto cu = sc.ratio_class(u);
        const auto cv = sc.ratio_class(v);
        if (!cu || !cv)
          continue;
        Decomposition d;
        d.target = t;
        d.nterms = 2;
        d.terms[0] = make_term(*cand[a], u, *cu);
        d.terms[1] = make_term(*cand[b], v, *cv);
        decomps_.push_back(d);
      }
    }
  }

  for (int d = 0; d < static_cast<int>(decomps_.size()); ++d) {
    const Decomposition &dec = decomps_[d];
    for (int k = 0; k < dec.nterms; ++k)
      for (int f = 0; f < dec.terms[k].nfactors; ++f) {
        auto &dep = dependents_[dec.terms[k].factors[f]];
        if (dep.empty() || dep.back() != d)
          dep.push_back(d);
      }
  }
}

std::shared_ptr<const Universe> Universe::get(ScenarioId scenario, const AtomNames &names,
                                              const std::vector<Expr> &exprs) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Universe>> cache;
  std::string key = std::string(to_string(scenario)) + "|" + names.first + "," +
                    names.second + "|";
  for (const auto &e : exprs)
    key += e.str(names) + ";";
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it != cache.end())
    return it->second;
  auto u = std::make_shared<Universe>();
  u->scenario = scenario;
  u->names = names;
  u->exprs = exprs;
  u->index = std::make_shared<DecompIndex>(scenario, exprs);
  cache.emplace(key, u);
  return u;
}

// ---------------------------------------------------------------------------
// Knowledge base

KnowledgeBase::KnowledgeBase(Scenario scenario, AtomNames names)
    : scenario_(std::move(scenario)), names_(std::move(names)) {}

int KnowledgeBase::find(const Expr &e) const {
  for (std::size_t i = 0; i < exprs_.size(); ++i)
    if (exprs_[i] == e)
      return static_cast<int>(i);
  return -1;
}

int KnowledgeBase::require(const Expr &e) const {
  const int i = find(e);
  if (i < 0)
    throw Error(ErrorKind::MissingFact, "no fact about " + e.str(names_));
  return i;
}

int KnowledgeBase::add(const Expr &e, std::optional<ClassSet> set,
                       const std::string &justification) {
  if (e.is_zero())
    throw Error(ErrorKind::ZeroScalar, "expressions in a knowledge base are nonzero");
  if (set && set->basis() != scenario_.basis())
    throw Error(ErrorKind::MixedGroups, "fact uses a different class group");
  const std::uint8_t mask = set ? set->mask() : 0xFF;
  const int i = find(e);
  if (i >= 0) {
    masks_[i] &= mask;
    if (set && justify_[i] == "target")
      justify_[i] = justification;
    return i;
  }
  exprs_.push_back(e);
  masks_.push_back(mask);
  justify_.push_back(set ? justification : "target");
  universe_.reset();
  return static_cast<int>(exprs_.size()) - 1;
}

int KnowledgeBase::add(std::string_view text, std::optional<ClassSet> set,
                       const std::string &justification) {
  return add(parse_expr(text, names_), set, justification);
}

ClassSet KnowledgeBase::set(const Expr &e) const {
  const int i = find(e);
  return i < 0 ? ClassSet::full(scenario_.basis()) : set(i);
}

void KnowledgeBase::set_masks(std::vector<std::uint8_t> masks) {
  if (masks.size() != masks_.size())
    throw Error(ErrorKind::InvalidArgument, "mask vector size mismatch");
  masks_ = std::move(masks);
}

std::shared_ptr<const Universe> KnowledgeBase::universe() const {
  if (!universe_)
    universe_ = Universe::get(scenario_.id(), names_, exprs_);
  return universe_;
}

bool Goal::satisfied(const std::vector<std::uint8_t> &masks) const {
  for (const auto &a : alts)
    if (masks[a.expr] != 0 && (masks[a.expr] & ~a.mask) == 0)
      return true;
  return false;
}

std::string_view to_string(Outcome o) {
  switch (o) {
  case Outcome::Proved:
    return "proved";
  case Outcome::Stuck:
    return "stuck";
  case Outcome::Contradiction:
    return "contradiction";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Engine

namespace {

using Masks = std::vector<std::uint8_t>;
using Steps = std::vector<TraceStep>;

struct Node {
  Outcome status = Outcome::Stuck;
  Masks masks;
};

class Engine {
public:
  Engine(const Universe &u, const SumTables &t, const EngineOptions &o)
      : decomps_(u.index->decompositions()), index_(*u.index), tables_(t), opts_(o),
        n_(static_cast<int>(u.exprs.size())) {}

  std::uint8_t eval(const Decomposition &d, const Masks &m) const {
    std::uint8_t sets[2];
    for (int k = 0; k < d.nterms; ++k) {
      const DecompTerm &t = d.terms[k];
      std::uint8_t s = 1u; // the class 1
      if (t.nfactors == 1)
        s = m[t.factors[0]];
      else if (t.nfactors == 2)
        s = tables_.set_product(m[t.factors[0]], m[t.factors[1]]);
      sets[k] = coset_table()[t.coef_class.bits()][s];
    }
    return d.nterms == 1 ? sets[0] : tables_.set_sum(sets[0], sets[1]);
  }

  /// false on contradiction
  bool propagate(Masks &m, Steps *steps, const std::vector<int> *seeds) {
    std::deque<int> queue;
    std::vector<char> queued(decomps_.size(), 0);
    auto push_dependents = [&](int i) {
      for (int d : index_.dependents(i))
        if (!queued[d]) {
          queued[d] = 1;
          queue.push_back(d);
        }
    };
    if (seeds) {
      for (int i : *seeds)
        push_dependents(i);
    } else {
      for (std::size_t d = 0; d < decomps_.size(); ++d) {
        queued[d] = 1;
        queue.push_back(static_cast<int>(d));
      }
    }
    while (!queue.empty()) {
      const int d = queue.front();
      queue.pop_front();
      queued[d] = 0;
      const Decomposition &dec = decomps_[d];
      const std::uint8_t r = eval(dec, m);
      const int t = dec.target;
      const std::uint8_t after = m[t] & r;
      if (after == m[t])
        continue;
      if (steps) {
        TraceStep s;
        s.kind = TraceStep::Kind::Decompose;
        s.decomp = d;
        s.expr = t;
        s.result = r;
        s.before = m[t];
        s.after = after;
        steps->push_back(std::move(s));
      }
      m[t] = after;
      if (after == 0)
        return false;
      push_dependents(t);
    }
    return true;
  }

  bool refute(Masks &trial, int i, int level, int split_depth, Steps *sub) {
    const std::vector<int> seed{i};
    if (!propagate(trial, sub, &seed))
      return true;
    if (level > 1 && !probe(trial, sub, level - 1, 0))
      return true;
    if (split_depth > 0) {
      Node node = prove(trial, Goal{}, split_depth, sub, nullptr, false);
      return node.status == Outcome::Contradiction;
    }
    return false;
  }

  /// Failed-literal refinement; false on contradiction.
  bool probe(Masks &m, Steps *steps, int level, int split_depth) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n_; ++i) {
        if (std::popcount(static_cast<unsigned>(m[i])) < 2)
          continue;
        for (int b = 0; b < 8; ++b) {
          if (!((m[i] >> b) & 1u) || std::popcount(static_cast<unsigned>(m[i])) < 2)
            continue;
          Masks trial = m;
          trial[i] = static_cast<std::uint8_t>(1u << b);
          Steps sub;
          if (!refute(trial, i, level, split_depth, steps ? &sub : nullptr))
            continue;
          const std::uint8_t before = m[i];
          m[i] = static_cast<std::uint8_t>(m[i] & ~(1u << b));
          if (steps) {
            TraceStep s;
            s.kind = TraceStep::Kind::Refute;
            s.expr = i;
            s.candidate = static_cast<std::uint8_t>(b);
            s.before = before;
            s.after = m[i];
            s.steps = std::move(sub);
            steps->push_back(std::move(s));
          }
          const std::vector<int> seed{i};
          if (!propagate(m, steps, &seed))
            return false;
          changed = true;
        }
      }
    }
    return true;
  }

  Node prove(Masks m, const Goal &goal, int depth, Steps *steps,
             const std::vector<int> *seeds, bool full_start) {
    Node node;
    if (!propagate(m, steps, full_start ? nullptr : seeds)) {
      node.status = Outcome::Contradiction;
      node.masks = std::move(m);
      return node;
    }
    if (goal.satisfied(m)) {
      node.status = Outcome::Proved;
      node.masks = std::move(m);
      return node;
    }
    if (opts_.probe_depth > 0) {
      if (!probe(m, steps, opts_.probe_depth, 0)) {
        node.status = Outcome::Contradiction;
        node.masks = std::move(m);
        return node;
      }
      if (goal.satisfied(m)) {
        node.status = Outcome::Proved;
        node.masks = std::move(m);
        return node;
      }
    }
    int pick = -1;
    if (depth > 0) {
      int best = 9;
      for (int i = 0; i < n_; ++i) {
        const int c = std::popcount(static_cast<unsigned>(m[i]));
        if (c >= 2 && c < best) {
          best = c;
          pick = i;
        }
      }
    }
    if (pick < 0) {
      node.status = Outcome::Stuck;
      node.masks = std::move(m);
      return node;
    }
    TraceStep split;
    split.kind = TraceStep::Kind::Split;
    split.expr = pick;
    split.before = m[pick];
    Masks joined(m.size(), 0);
    bool any_stuck = false, any_alive = false;
    for (int b = 0; b < 8; ++b) {
      if (!((m[pick] >> b) & 1u))
        continue;
      Masks child = m;
      child[pick] = static_cast<std::uint8_t>(1u << b);
      SplitCase sc;
      sc.candidate = static_cast<std::uint8_t>(b);
      const std::vector<int> seed{pick};
      Node r = prove(std::move(child), goal, depth - 1, steps ? &sc.steps : nullptr,
                     &seed, false);
      sc.outcome = r.status;
      if (r.status != Outcome::Contradiction) {
        any_alive = true;
        for (std::size_t k = 0; k < joined.size(); ++k)
          joined[k] |= r.masks[k];
      }
      if (r.status == Outcome::Stuck)
        any_stuck = true;
      if (steps)
        split.cases.push_back(std::move(sc));
    }
    if (steps)
      steps->push_back(std::move(split));
    node.status = !any_alive ? Outcome::Contradiction
                             : any_stuck ? Outcome::Stuck : Outcome::Proved;
    node.masks = any_alive ? std::move(joined) : std::move(m);
    return node;
  }

private:
  const std::vector<Decomposition> &decomps_;
  const DecompIndex &index_;
  const SumTables &tables_;
  EngineOptions opts_;
  int n_;
};

ProofTrace start_trace(const KnowledgeBase &kb, const Goal &goal) {
  ProofTrace tr;
  tr.universe = kb.universe();
  tr.norm_lattice = kb.scenario().lattice();
  tr.initial = kb.masks();
  for (std::size_t i = 0; i < kb.size(); ++i)
    tr.justifications.push_back(kb.justification(static_cast<int>(i)));
  tr.goal = goal;
  return tr;
}

} // namespace

ClassSet decompose_step(const KnowledgeBase &kb0, const Expr &target) {
  KnowledgeBase kb = kb0;
  const int t = kb.add(target);
  auto u = kb.universe();
  Engine engine(*u, kb.scenario().tables(), EngineOptions{});
  std::uint8_t m = kb.masks()[t];
  for (const auto &d : u->index->decompositions())
    if (d.target == t)
      m &= engine.eval(d, kb.masks());
  if (m == 0)
    throw Error(ErrorKind::ContradictionFound,
                "no class is possible for " + target.str(kb.names()));
  return {kb.scenario().basis(), m};
}

KnowledgeBase propagate(const KnowledgeBase &kb0, const std::vector<Expr> &targets) {
  KnowledgeBase kb = kb0;
  for (const auto &t : targets)
    kb.add(t);
  auto u = kb.universe();
  Engine engine(*u, kb.scenario().tables(), EngineOptions{});
  Masks m = kb.masks();
  if (!engine.propagate(m, nullptr, nullptr))
    throw Error(ErrorKind::ContradictionFound, "hypotheses propagate to a contradiction");
  kb.set_masks(std::move(m));
  return kb;
}

ProofResult refine(const KnowledgeBase &kb, const EngineOptions &opts) {
  ProofResult res;
  res.trace = start_trace(kb, Goal{});
  auto u = kb.universe();
  Engine engine(*u, kb.scenario().tables(), opts);
  Masks m = kb.masks();
  Steps *steps = opts.record_trace ? &res.trace.steps : nullptr;
  bool ok = engine.propagate(m, steps, nullptr);
  if (ok)
    ok = engine.probe(m, steps, std::max(1, opts.probe_depth), opts.refine_split_depth);
  res.status = ok ? Outcome::Stuck : Outcome::Contradiction;
  res.masks = std::move(m);
  res.trace.outcome = res.status;
  return res;
}

ProofResult prove(const KnowledgeBase &kb, const Goal &goal, const EngineOptions &opts) {
  if (opts.depth < 0)
    throw Error(ErrorKind::InvalidArgument, "negative proof depth");
  ProofResult res;
  res.trace = start_trace(kb, goal);
  auto u = kb.universe();
  Engine engine(*u, kb.scenario().tables(), opts);
  Node node = engine.prove(kb.masks(), goal, opts.depth,
                           opts.record_trace ? &res.trace.steps : nullptr, nullptr, true);
  res.status = node.status;
  res.masks = std::move(node.masks);
  res.trace.outcome = res.status;
  return res;
}

ProofResult prove(const KnowledgeBase &kb0, const Expr &target, ClassSet goal,
                  const EngineOptions &opts) {
  KnowledgeBase kb = kb0;
  const int t = kb.add(target);
  return prove(kb, Goal::single(t, goal), opts);
}

KnowledgeBase substitute_transform(const KnowledgeBase &kb, const Scalar &a, int slot) {
  const Expr var = Expr::atom(slot);
  const Expr one_plus = Expr::one_plus(a, slot);
  const int iv = kb.find(var);
  const int ip = kb.find(one_plus);
  if (iv < 0 || ip < 0)
    throw Error(ErrorKind::MissingFact,
                "substitution needs classes of " + var.str(kb.names()) + " and " +
                    one_plus.str(kb.names()));
  const auto ca = kb.scenario().scalar_class(a);
  if (!ca)
    throw Error(ErrorKind::MissingFact, "class of " + a.str() + " is not known");
  const Basis B = kb.scenario().basis();
  const SquareClass shift = SquareClass::minus_one(B) * *ca;
  const ClassSet prime = coset(shift, product_set(kb.set(iv), kb.set(ip)));

  AtomNames names = kb.names();
  (slot == 0 ? names.first : names.second) += "'";
  KnowledgeBase out(kb.scenario(), names);
  out.add(var, prime, "substitution");
  out.add(Expr::one_plus(Scalar(1), slot), kb.set(ip), "substitution");
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json labels(Basis b, std::uint8_t mask) { return ClassSet(b, mask).labels(); }

nlohmann::json steps_json(const std::vector<TraceStep> &steps, const Universe &u,
                          Basis B) {
  nlohmann::json out = nlohmann::json::array();
  const auto &decomps = u.index->decompositions();
  for (const auto &s : steps) {
    nlohmann::json j;
    const std::string target = u.exprs[s.expr].str(u.names);
    switch (s.kind) {
    case TraceStep::Kind::Decompose: {
      const Decomposition &d = decomps[s.decomp];
      j["kind"] = "decompose";
      j["target"] = target;
      nlohmann::json terms = nlohmann::json::array();
      for (int k = 0; k < d.nterms; ++k) {
        const DecompTerm &t = d.terms[k];
        nlohmann::json factors = nlohmann::json::array();
        for (int f = 0; f < t.nfactors; ++f)
          factors.push_back(u.exprs[t.factors[f]].str(u.names));
        terms.push_back({{"coef", t.coef.str()}, {"factors", factors}});
      }
      j["terms"] = terms;
      j["result"] = labels(B, s.result);
      j["before"] = labels(B, s.before);
      j["after"] = labels(B, s.after);
      break;
    }
    case TraceStep::Kind::Refute:
      j["kind"] = "refute";
      j["expr"] = target;
      j["candidate"] = std::string(ClassGroup(B).label(s.candidate));
      j["before"] = labels(B, s.before);
      j["after"] = labels(B, s.after);
      j["steps"] = steps_json(s.steps, u, B);
      break;
    case TraceStep::Kind::Split: {
      j["kind"] = "split";
      j["expr"] = target;
      j["before"] = labels(B, s.before);
      nlohmann::json cases = nlohmann::json::array();
      for (const auto &c : s.cases)
        cases.push_back({{"candidate", std::string(ClassGroup(B).label(c.candidate))},
                         {"outcome", std::string(to_string(c.outcome))},
                         {"steps", steps_json(c.steps, u, B)}});
      j["cases"] = cases;
      break;
    }
    }
    out.push_back(std::move(j));
  }
  return out;
}

} // namespace

nlohmann::json lattice_json(const NormLattice &L) {
  nlohmann::json groups = nlohmann::json::object();
  const ClassGroup G = L.group();
  for (std::uint8_t a = 1; a < 8; ++a)
    groups[std::string(G.label(a))] = L.norm_group(SquareClass(L.basis(), a)).labels();
  return {{"scenario", std::string(to_string(L.scenario()))}, {"groups", groups}};
}

nlohmann::json to_json(const ProofTrace &tr) {
  const Universe &u = *tr.universe;
  const Basis B = tr.norm_lattice.basis();
  nlohmann::json facts = nlohmann::json::array();
  for (std::size_t i = 0; i < u.exprs.size(); ++i)
    facts.push_back({{"expr", u.exprs[i].str(u.names)},
                     {"set", labels(B, tr.initial[i])},
                     {"justification", i < tr.justifications.size()
                                           ? tr.justifications[i]
                                           : std::string("target")}});
  nlohmann::json goal = nlohmann::json::array();
  for (const auto &a : tr.goal.alts)
    goal.push_back({{"expr", u.exprs[a.expr].str(u.names)}, {"set", labels(B, a.mask)}});
  return {{"scenario", std::string(to_string(u.scenario))},
          {"lattice", lattice_json(tr.norm_lattice)},
          {"atoms", {u.names.first, u.names.second}},
          {"facts", facts},
          {"goal", goal},
          {"outcome", std::string(to_string(tr.outcome))},
          {"steps", steps_json(tr.steps, u, B)}};
}

} // namespace normcomb
