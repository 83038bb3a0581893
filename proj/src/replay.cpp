#include "normcomb/replay.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <tuple>

#include "normcomb/dyadic.hpp"
#include "normcomb/error.hpp"
#include "normcomb/poly.hpp"
#include "normcomb/trace.hpp"

namespace normcomb {

using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Case specifications

struct Fact {
  std::string expr;
  ClassSet set;
  std::string why;
  bool hypothesis = false;
};

struct AltSpec {
  std::string expr;
  ClassSet set;
};

struct CaseSpec {
  std::string theorem, label;
  Scenario scenario;
  AtomNames names;
  std::vector<Fact> facts;
  std::vector<std::string> universe;
  /// Conjunction of disjunctions.
  std::vector<std::vector<AltSpec>> goals;
  std::vector<std::pair<std::string, ClassSet>> pinned;
  std::vector<std::string> report_targets;
  /// Table rows: (column, stored cell). Derived without a goal.
  std::vector<std::pair<std::string, ClassSet>> cells;
};

SquareClass cls(Basis b, const std::string &label) {
  return parse_class(label, ClassGroup(b));
}

ClassSet set_of(Basis b, const std::vector<std::string> &labels) {
  return parse_class_set(labels, ClassGroup(b));
}

ClassSet norm(const Scenario &sc, const std::string &label) {
  return sc.lattice().norm_group(cls(sc.basis(), label));
}

std::string case_label(const std::vector<std::pair<std::string, std::string>> &hyp) {
  std::string out;
  for (const auto &[e, c] : hyp) {
    if (!out.empty())
      out += ", ";
    out += e + "~" + c;
  }
  return out;
}

/// "1 + k*v" for each coefficient text k.
std::vector<std::string> one_plus_items(const std::string &v,
                                        const std::vector<std::string> &coefs) {
  std::vector<std::string> out{v};
  for (const auto &k : coefs)
    out.push_back("1 + (" + k + ")*" + v);
  return out;
}

const std::vector<std::string> kCoefsA = {"1",   "-1",  "2",   "-2",  "3",
                                          "-3",  "4",   "-4",  "5",   "-5",
                                          "1/5", "-1/5", "1/3", "-1/3"};

const std::vector<std::string> kCoefsB = {
    "1",     "-1",      "2",     "-2",      "3",     "-3",      "4",     "-4",
    "c - 1", "-(c - 1)", "c - 2", "-(c - 2)", "c - 3", "-(c - 3)", "c - 4", "-(c - 4)"};

/// (class of v, class of 1+v) for v in the first set of the rigid pair.
const std::vector<std::pair<std::string, std::string>> kRowsA = {
    {"2", "1"}, {"2", "-5"}, {"-2", "1"}, {"-2", "-1"},
    {"10", "1"}, {"10", "-5"}, {"-10", "1"}, {"-10", "-1"}};

const std::vector<std::pair<std::string, std::string>> kRowsB = {
    {"c", "1"}, {"c", "-2"}, {"-c", "1"}, {"-c", "-1"},
    {"2c", "1"}, {"2c", "-2"}, {"-2c", "1"}, {"-2c", "-1"}};

Scenario case_a(const ReplayOptions &opts) {
  return Scenario(ScenarioId::CaseA, opts.case_a_lattice);
}

void add_hypotheses(CaseSpec &s, const std::string &v, const std::string &cv,
                    const std::string &c1, const std::string &why) {
  const Basis B = s.scenario.basis();
  s.facts.push_back({v, set_of(B, {cv}), why, true});
  s.facts.push_back({"1 + " + v, set_of(B, {c1}), why, true});
}

/// Case A: v in the first set is closed under -1, +-5, +-1/5 and has
/// 1+2v, 1+4v in N(5).
void add_case_a_closure(CaseSpec &s, const std::string &v) {
  const ClassSet n5 = norm(s.scenario, "5");
  for (const char *a : {"-1", "5", "-5", "1/5", "-1/5"})
    s.facts.push_back({"1 + (" + std::string(a) + ")*" + v, n5,
                       "closure under multiplication by " + std::string(a)});
  for (const char *a : {"2", "4"})
    s.facts.push_back({"1 + " + std::string(a) + "*" + v, n5, "lemma-4.4"});
}

/// Case B: closure under -1, +-2, +-1/2 (1 + v/2 is recorded as 2 + v).
void add_case_b_closure(CaseSpec &s, const std::string &v) {
  const ClassSet n2 = norm(s.scenario, "2");
  for (const std::string e : {"1 - " + v, "1 + 2*" + v, "1 - 2*" + v, "2 + " + v, "2 - " + v})
    s.facts.push_back({e, n2, "case-b-units"});
}

// ---------------------------------------------------------------------------
// Running one case

void record_trace(CaseReport &rep, const ProofTrace &t, const ReplayOptions &opts) {
  ++rep.traces;
  if (!opts.check_traces && !opts.keep_traces)
    return;
  json j = to_json(t);
  if (opts.check_traces) {
    const TraceCheck c = check_trace(j);
    if (!c.ok) {
      ++rep.trace_failures;
      rep.trace_messages.push_back(c.message);
    }
  }
  if (opts.keep_traces)
    rep.trace_json.push_back(std::move(j));
}

void run_oracle(CaseReport &rep, const KnowledgeBase &kb,
                const std::vector<std::uint8_t> &masks, const ReplayOptions &opts) {
  OracleResult o;
  std::vector<ClassHypothesis> hyp;
  for (std::size_t i = 0; i < kb.size(); ++i)
    if (kb.masks()[i] != 0xFF)
      hyp.push_back({kb.expr(static_cast<int>(i)), kb.set(static_cast<int>(i))});
  const SampleResult sr =
      sample_hypothesis(hyp, opts.oracle_samples, opts.seed, opts.precision);
  o.unsatisfiable_at_budget = sr.unsatisfiable_at_budget;
  for (const auto &t : sr.tuples) {
    ++o.samples;
    for (std::size_t i = 0; i < kb.size(); ++i) {
      const Expr &e = kb.expr(static_cast<int>(i));
      try {
        const Dyadic v = evaluate(e, t[0], t[1], opts.precision);
        if (v.is_zero()) {
          ++o.zero_values;
          continue;
        }
        const SquareClass c = square_class_of(v);
        if (!((masks[i] >> c.bits()) & 1u) && o.violations.size() < 20)
          o.violations.push_back(e.str(kb.names()) + " at (" + t[0].str() + ", " +
                                 t[1].str() + ") has class " + c.label() +
                                 " outside " + ClassSet(kb.scenario().basis(), masks[i]).str());
      } catch (const Error &err) {
        if (err.kind() != ErrorKind::PrecisionExhausted)
          throw;
        ++o.zero_values;
      }
    }
  }
  rep.oracle = std::move(o);
}

CaseReport run_case(const CaseSpec &spec, const ReplayOptions &opts) {
  CaseReport rep;
  rep.theorem = spec.theorem;
  rep.label = spec.label;
  rep.scenario = std::string(to_string(spec.scenario.id()));

  KnowledgeBase kb(spec.scenario, spec.names);
  for (const auto &f : spec.facts) {
    kb.add(f.expr, f.set, f.why);
    if (f.hypothesis)
      rep.hypotheses.emplace_back(parse_expr(f.expr, spec.names).str(spec.names), f.set);
  }
  for (const auto &u : spec.universe)
    kb.add(u);
  std::vector<Goal> goals;
  for (const auto &g : spec.goals) {
    Goal goal;
    for (const auto &a : g)
      goal.alts.push_back({kb.add(a.expr), a.set.mask()});
    goals.push_back(goal);
  }
  for (const auto &p : spec.pinned)
    kb.add(p.first);
  for (const auto &t : spec.report_targets)
    kb.add(t);
  for (const auto &c : spec.cells)
    kb.add(c.first);

  EngineOptions eo;
  eo.depth = opts.depth;
  eo.record_trace = opts.check_traces || opts.keep_traces;

  const ProofResult ref = refine(kb, eo);
  record_trace(rep, ref.trace, opts);
  std::vector<std::uint8_t> masks = ref.masks;
  bool impossible = ref.status == Outcome::Contradiction;
  bool stuck = false;

  if (!impossible) {
    for (const auto &g : goals) {
      const ProofResult pr = prove(kb, g, eo);
      record_trace(rep, pr.trace, opts);
      if (pr.status == Outcome::Contradiction) {
        impossible = true;
        break;
      }
      if (pr.status == Outcome::Stuck)
        stuck = true;
      for (std::size_t i = 0; i < masks.size(); ++i)
        masks[i] &= pr.masks[i];
    }
  }
  if (!impossible && !spec.cells.empty()) {
    // An empty goal is never met, so prove splits to full depth and returns
    // the union over the surviving branches.
    const ProofResult pr = prove(kb, Goal{}, eo);
    record_trace(rep, pr.trace, opts);
    if (pr.status == Outcome::Contradiction)
      impossible = true;
    else
      masks = pr.masks;
  }
  if (impossible)
    std::fill(masks.begin(), masks.end(), 0);

  const Basis B = spec.scenario.basis();
  auto add_target = [&](int i, std::optional<ClassSet> goal) {
    const std::string e = kb.expr(i).str(kb.names());
    for (auto &t : rep.targets)
      if (t.expr == e) {
        if (goal)
          t.goal = goal;
        return;
      }
    rep.targets.push_back({e, ClassSet(B, masks[i]), goal});
  };
  for (const auto &g : goals)
    for (const auto &a : g.alts)
      add_target(a.expr, ClassSet(B, a.mask));
  for (const auto &t : spec.report_targets)
    add_target(kb.find(parse_expr(t, spec.names)), std::nullopt);
  for (const auto &[e, stored] : spec.cells) {
    const int i = kb.find(parse_expr(e, spec.names));
    add_target(i, std::nullopt);
    rep.targets.back().stored = stored;
    const ClassSet d(B, masks[i]);
    if (d.is_empty() || !d.subset_of(stored))
      rep.notes.push_back(rep.targets.back().expr + ": derived " + d.str() +
                          " not within the stored cell " + stored.str());
  }

  rep.status = impossible ? "hypothesis-impossible" : stuck ? "stuck" : "proved";

  for (const auto &[e, expected] : spec.pinned) {
    const int i = kb.find(parse_expr(e, spec.names));
    PinnedCheck pc{kb.expr(i).str(kb.names()), expected, ClassSet(B, masks[i]), false};
    pc.ok = !pc.derived.is_empty() && pc.derived.subset_of(expected);
    if (!pc.ok && rep.status == "proved")
      rep.status = "failed";
    rep.pinned.push_back(pc);
  }

  if (opts.oracle && spec.scenario.id() == ScenarioId::CaseA && !impossible)
    run_oracle(rep, kb, masks, opts);
  return rep;
}

// ---------------------------------------------------------------------------
// Case A suites

std::vector<CaseSpec> lemma44_specs(const ReplayOptions &opts) {
  std::vector<CaseSpec> out;
  const Scenario sc = case_a(opts);
  const ClassSet n5 = norm(sc, "5");
  for (const auto &[cx, c1] : kRowsA) {
    CaseSpec s{"lemma-4.4", case_label({{"x", cx}, {"1+x", c1}}), sc};
    add_hypotheses(s, "x", cx, c1, "hypothesis");
    s.universe = one_plus_items("x", kCoefsA);
    s.goals = {{{"1 + 2*x", n5}}, {{"1 + 4*x", n5}}};
    if (cx == "2" && c1 == "1")
      s.pinned.push_back({"1 + 2*x", set_of(sc.basis(), {"1"})});
    out.push_back(std::move(s));
  }
  return out;
}

// Scripted replay of the closure argument: identities plus class bookkeeping.
class Script {
public:
  Script(const Scenario &sc, ClassSet n, std::string norm_label)
      : sc_(sc), n_(n.mask()), comp_(n.complement().mask()),
        norm_label_(std::move(norm_label)) {}

  void fact(const std::string &e, std::uint8_t m, const std::string &why) {
    facts_.push_back({{"expr", e}, {"set", labels(m)}, {"justification", why}});
    put(e, m);
  }
  void identity(const std::string &l, const std::string &r) {
    steps_.push_back({{"kind", "identity"}, {"lhs", l}, {"rhs", r}});
  }
  std::uint8_t classcalc(const std::string &e,
                         const std::vector<std::pair<std::string, int>> &factors) {
    ClassSet set = ClassSet::single(SquareClass::one(sc_.basis()));
    json fs = json::array();
    for (const auto &[f, ex] : factors) {
      set = product_set(set, ClassSet(sc_.basis(), lookup(f)));
      fs.push_back({{"expr", f}, {"exp", ex}});
    }
    steps_.push_back({{"kind", "classcalc"},
                      {"expr", e},
                      {"factors", fs},
                      {"result", labels(set.mask())}});
    put(e, set.mask());
    return set.mask();
  }
  void lemma44(const std::string &z) {
    const std::string a = "1 + 2*(" + z + ")", b = "1 + 4*(" + z + ")";
    steps_.push_back({{"kind", "apply"},
                      {"rule", "lemma-4.4"},
                      {"norm", norm_label_},
                      {"atom", z},
                      {"conclusions",
                       {{{"expr", a}, {"set", labels(n_)}}, {{"expr", b}, {"set", labels(n_)}}}}});
    put(a, n_);
    put(b, n_);
  }
  void unit(const std::string &a, const std::string &z) {
    const std::string az = "(" + a + ")*(" + z + ")", one = "1 + " + az;
    const auto ca = scalar(a);
    const std::uint8_t m = mask_coset(ca.bits(), lookup(z));
    steps_.push_back({{"kind", "apply"},
                      {"rule", "unit"},
                      {"unit", a},
                      {"norm", norm_label_},
                      {"atom", z},
                      {"conclusions",
                       {{{"expr", az}, {"set", labels(m)}}, {{"expr", one}, {"set", labels(n_)}}}}});
    put(az, m);
    put(one, n_);
  }
  void establish(const std::string &a, const std::string &x) {
    steps_.push_back({{"kind", "establish"}, {"unit", a}, {"atom", x}, {"norm", norm_label_}});
    established_.push_back(a);
  }

  std::uint8_t comp() const { return comp_; }
  std::uint8_t n() const { return n_; }
  std::uint8_t lookup(const std::string &e) const {
    const RationalFunction f = parse_rational_function(e);
    for (const auto &[k, m] : state_)
      if (k == e || verify_identity(parse_rational_function(k), f))
        return m;
    return ClassSet::single(scalar(e)).mask();
  }

  json to_json(const std::string &outcome, const json &goal) const {
    return {{"scenario", std::string(normcomb::to_string(sc_.id()))},
            {"lattice", lattice_json(sc_.lattice())},
            {"atoms", {"x", "y"}},
            {"facts", facts_},
            {"goal", goal},
            {"goal_mode", "all"},
            {"outcome", outcome},
            {"steps", steps_}};
  }
  const std::vector<std::string> &established() const { return established_; }
  json labels(std::uint8_t m) const { return ClassSet(sc_.basis(), m).labels(); }

private:
  SquareClass scalar(const std::string &e) const {
    const auto c = sc_.ratio_class(to_scalar_ratio(parse_rational_function(e)));
    if (!c)
      throw Error(ErrorKind::MissingFact, "no class for " + e);
    return *c;
  }
  void put(const std::string &e, std::uint8_t m) {
    for (auto &[k, v] : state_)
      if (k == e) {
        v &= m;
        return;
      }
    state_.emplace_back(e, m);
  }

  const Scenario &sc_;
  std::uint8_t n_, comp_;
  std::string norm_label_;
  json facts_ = json::array();
  json steps_ = json::array();
  std::vector<std::pair<std::string, std::uint8_t>> state_;
  std::vector<std::string> established_;
};

CaseReport replay_cor45(const ReplayOptions &opts) {
  const Scenario sc = case_a(opts);
  Script s(sc, norm(sc, "5"), "5");
  s.fact("x", s.comp(), "x in O1: x not in N(5)");
  s.fact("1 + x", s.n(), "x in O1: 1 + x in N(5)");

  // -1
  s.identity("1 - x/(1+x)", "1/(1+x)");
  s.classcalc("-x/(1+x)", {{"-1", 1}, {"x", 1}, {"1+x", -1}});
  s.classcalc("1 + (-x/(1+x))", {{"1+x", -1}});
  s.lemma44("-x/(1+x)");
  s.identity("(1+x)*(1-2*x/(1+x))", "1-x");
  s.classcalc("1-x", {{"1+x", 1}, {"1 + 2*(-x/(1+x))", 1}});
  s.classcalc("(-1)*(x)", {{"-1", 1}, {"x", 1}});
  s.establish("-1", "x");
  // 5
  s.unit("-1", "-x/(1+x)");
  s.lemma44("(-1)*(-x/(1+x))");
  s.identity("(1+x)*(1+4*x/(1+x))", "1+5*x");
  s.classcalc("1+5*x", {{"1+x", 1}, {"1 + 4*((-1)*(-x/(1+x)))", 1}});
  s.classcalc("(5)*(x)", {{"5", 1}, {"x", 1}});
  s.establish("5", "x");
  // 1/5
  s.identity("1 - 2/(1+x)", "-(1-x)/(1+x)");
  s.classcalc("1 - 2/(1+x)", {{"-1", 1}, {"1-x", 1}, {"1+x", -1}});
  s.classcalc("-2/(1+x)", {{"-2", 1}, {"1+x", -1}});
  s.unit("-1", "-2/(1+x)");
  s.lemma44("(-1)*(-2/(1+x))");
  s.identity("(1+4/(1+x))*(1+x)", "5+x");
  s.classcalc("5+x", {{"1 + 2*((-1)*(-2/(1+x)))", 1}, {"1+x", 1}});
  s.identity("5+x", "5*(1+x/5)");
  s.classcalc("1+x/5", {{"5", -1}, {"5+x", 1}});
  s.classcalc("(1/5)*(x)", {{"1/5", 1}, {"x", 1}});
  s.establish("1/5", "x");
  // products
  s.unit("5", "x");
  s.unit("-1", "(5)*(x)");
  s.establish("-5", "x");
  s.unit("1/5", "x");
  s.unit("-1", "(1/5)*(x)");
  s.establish("-1/5", "x");

  json goal = json::array();
  bool all = true;
  CaseReport rep;
  rep.theorem = "cor-4.5";
  rep.label = "x in O1";
  rep.scenario = "case-a";
  rep.hypotheses = {{"x", ClassSet(sc.basis(), s.comp())},
                    {"1 + x", ClassSet(sc.basis(), s.n())}};
  for (const char *a : {"-1", "5", "1/5", "-5", "-1/5"}) {
    const std::string ax = "(" + std::string(a) + ")*(x)";
    const std::uint8_t m1 = s.lookup(ax), m2 = s.lookup("1 + " + ax);
    goal.push_back({{"expr", ax}, {"set", s.labels(s.comp())}});
    goal.push_back({{"expr", "1 + " + ax}, {"set", s.labels(s.n())}});
    const bool ok = (m1 & ~s.comp()) == 0 && (m2 & ~s.n()) == 0;
    all &= ok;
    rep.targets.push_back({ax, ClassSet(sc.basis(), m1), ClassSet(sc.basis(), s.comp())});
    rep.targets.push_back(
        {"1 + " + ax, ClassSet(sc.basis(), m2), ClassSet(sc.basis(), s.n())});
  }
  rep.status = all ? "proved" : "stuck";
  rep.notes.push_back("established units: -1, 5, 1/5, -5, -1/5");
  const json j = s.to_json(all ? "proved" : "stuck", goal);
  ++rep.traces;
  const TraceCheck c = check_trace(j);
  if (!c.ok) {
    ++rep.trace_failures;
    rep.trace_messages.push_back(c.message);
  }
  if (opts.keep_traces)
    rep.trace_json.push_back(j);

  if (opts.oracle) {
    // x in O1 in Q2: realized classes of 1 + a*x must lie in N(5).
    CaseSpec o{"cor-4.5", "", sc};
    KnowledgeBase kb(sc);
    kb.add("x", ClassSet(sc.basis(), s.comp()), "hypothesis");
    kb.add("1 + x", ClassSet(sc.basis(), s.n()), "hypothesis");
    std::vector<std::uint8_t> masks = kb.masks();
    for (const char *a : {"-1", "5", "1/5", "-5", "-1/5"}) {
      kb.add("1 + (" + std::string(a) + ")*x");
      masks.push_back(s.n());
    }
    run_oracle(rep, kb, masks, opts);
  }
  return rep;
}

const std::vector<std::tuple<std::string, std::string, std::string, std::string>>
    kProp46Cases = {
        {"2", "1", "10", "1"},   {"2", "1", "10", "-5"},  {"2", "1", "-10", "1"},
        {"2", "1", "-10", "-1"}, {"2", "-5", "10", "1"},  {"2", "-5", "10", "-5"},
        {"2", "-5", "-10", "1"}, {"2", "-5", "-10", "-1"}, {"2", "1", "2", "1"},
        {"2", "1", "2", "-5"},   {"2", "1", "-2", "1"},   {"2", "1", "-2", "-1"},
        {"2", "-5", "2", "-5"},  {"2", "-5", "-2", "1"},  {"2", "-5", "-2", "-1"}};

std::vector<CaseSpec> prop46_specs(const ReplayOptions &opts) {
  std::vector<CaseSpec> out;
  const Scenario sc = case_a(opts);
  const ClassSet n5 = norm(sc, "5");
  for (const auto &[cx, c1x, cy, c1y] : kProp46Cases) {
    CaseSpec s{"prop-4.6",
               case_label({{"x", cx}, {"1+x", c1x}, {"y", cy}, {"1+y", c1y}}), sc};
    add_hypotheses(s, "x", cx, c1x, "hypothesis");
    add_hypotheses(s, "y", cy, c1y, "hypothesis");
    add_case_a_closure(s, "x");
    add_case_a_closure(s, "y");
    for (const auto &v : {"x", "y"})
      for (const auto &e : one_plus_items(v, kCoefsA))
        s.universe.push_back(e);
    s.goals = {{{"1 - x*y", n5}}};
    if (c1x == "-5" && cy == "2" && c1y == "-5")
      s.pinned.push_back({"1 - x*y", set_of(sc.basis(), {"5"})});
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CaseSpec> lemma48_specs(const ReplayOptions &opts) {
  std::vector<CaseSpec> out;
  const Scenario sc = case_a(opts);
  const ClassSet n5 = norm(sc, "5");
  for (const char *c2 : {"1", "-5"}) {
    CaseSpec s{"lemma-4.8", case_label({{"x", "1"}, {"1+2x", c2}, {"y", "2"}}), sc};
    const Basis B = sc.basis();
    s.facts.push_back({"x", set_of(B, {"1"}), "hypothesis: x in A", true});
    s.facts.push_back({"1 + 2*x", set_of(B, {c2}), "hypothesis: x in A", true});
    s.facts.push_back({"y", set_of(B, {"2"}), "hypothesis: y in O1, scaled", true});
    s.facts.push_back({"1 + y", n5, "y in O1"});
    s.facts.push_back({"1 - y", n5, "closure under multiplication by -1"});
    s.facts.push_back({"1 + 2*x*y", n5, "prop-4.6 with -2x, y in O1"});
    s.facts.push_back({"1 + 4*x*y", n5, "4xy in O1 (ring)"});
    s.universe = {"1 + x*y", "1 + 5*x*y", "1 + 3*x*y", "1 - x*y"};
    s.goals = {{{"1 + x*y", n5}, {"1 + 5*x*y", n5}}};
    s.report_targets = {"1 + 2*x*y"};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CaseSpec> appendix_b_specs(const ReplayOptions &opts) {
  std::vector<CaseSpec> out;
  const Scenario sc = case_a(opts);
  const ClassSet n5 = norm(sc, "5");
  const ClassSet outside = n5.complement();
  for (const char *cx : {"1", "5", "-1", "-5"}) {
    CaseSpec s{"appendix-B", case_label({{"x", cx}}), sc};
    const Basis B = sc.basis();
    s.facts.push_back({"x", set_of(B, {cx}), "hypothesis: x a unit", true});
    s.facts.push_back({"1 + 2*x", n5, "unit characterization"});
    s.facts.push_back({"2 + x", n5, "unit characterization"});
    s.universe = {"1 + x", "3 + x", "5 + x", "1 - x", "1 + 3*x", "1 + 4*x", "1 - 2*x"};
    const std::string cxs = cx;
    if (cxs == "1" || cxs == "5")
      s.goals = {{{"1 + x", outside}}};
    else
      s.goals = {{{"3 + x", outside}}};
    if (cxs == "-1")
      s.pinned.push_back({"3 + x", set_of(B, {"2", "10"})});
    s.report_targets = {"1 + 2*x", "2 + x"};
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Case B suites

const std::vector<ScenarioId> kBranches = {ScenarioId::CaseB3is2, ScenarioId::CaseB3is1};

std::string branch_name(ScenarioId id) {
  return id == ScenarioId::CaseB3is2 ? "3~2" : "3~1";
}

std::vector<CaseSpec> case_b_units_specs(ScenarioId branch) {
  std::vector<CaseSpec> out;
  const Scenario sc(branch);
  const ClassSet n2 = norm(sc, "2");
  const std::string id = branch == ScenarioId::CaseB3is2 ? "case-b-units-3sim2"
                                                         : "case-b-units-3sim1";
  for (const auto &[cx, c1] : kRowsB) {
    CaseSpec s{id, case_label({{"x", cx}, {"1+x", c1}}), sc};
    add_hypotheses(s, "x", cx, c1, "hypothesis");
    s.universe = one_plus_items("x", kCoefsB);
    s.universe.push_back("2 + x");
    s.universe.push_back("2 - x");
    s.goals = {{{"1 - x", n2}}, {{"1 + 2*x", n2}}, {{"2 + x", n2}}};
    out.push_back(std::move(s));
  }
  return out;
}

const std::vector<std::tuple<std::string, std::string, std::string>> kOneMinusXYB = {
    {"1", "c", "1"},   {"1", "c", "-2"},  {"1", "-c", "1"},  {"1", "-c", "-1"},
    {"1", "2c", "1"},  {"1", "2c", "-2"}, {"1", "-2c", "1"}, {"1", "-2c", "-1"},
    {"-2", "c", "-2"}, {"-2", "-c", "1"}, {"-2", "-c", "-1"}, {"-2", "-2c", "1"},
    {"-2", "-2c", "-1"}};

std::vector<CaseSpec> case_b_oneminusxy_specs() {
  std::vector<CaseSpec> out;
  for (ScenarioId br : kBranches) {
    const Scenario sc(br);
    const ClassSet n2 = norm(sc, "2");
    for (const auto &[c1x, cy, c1y] : kOneMinusXYB) {
      CaseSpec s{"case-b-oneminusxy",
                 branch_name(br) + ": " +
                     case_label({{"x", "c"}, {"1+x", c1x}, {"y", cy}, {"1+y", c1y}}),
                 sc};
      add_hypotheses(s, "x", "c", c1x, "hypothesis");
      add_hypotheses(s, "y", cy, c1y, "hypothesis");
      add_case_b_closure(s, "x");
      add_case_b_closure(s, "y");
      for (const auto &v : {"x", "y"})
        for (const auto &e : one_plus_items(v, {"1", "-1", "2", "-2", "1/2", "-1/2"}))
          s.universe.push_back(e);
      s.goals = {{{"1 - x*y", n2}}};
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<CaseSpec> case_b_residue_specs() {
  std::vector<CaseSpec> out;
  for (ScenarioId br : kBranches) {
    const Scenario sc(br);
    const ClassSet n2 = norm(sc, "2");
    const Basis B = sc.basis();
    for (const char *c1 : {"-2", "1"}) {
      CaseSpec s{"case-b-residue-2",
                 branch_name(br) + ": " + case_label({{"x", "c"}, {"1+x", c1}, {"y", "1"}}),
                 sc};
      add_hypotheses(s, "x", "c", c1, "hypothesis");
      add_case_b_closure(s, "x");
      s.facts.push_back({"y", set_of(B, {"1"}), "hypothesis: y = a^2", true});
      s.universe = one_plus_items("x", {"1", "-1", "2", "-2"});
      s.universe.push_back("y - 2 + x");
      s.universe.push_back("y - 2 - x");
      if (std::string(c1) == "-2") {
        s.goals = {{{"y - 2 + x", n2}}};
        s.pinned.push_back({"2 - x", set_of(B, {"2"})});
      } else {
        s.goals = {{{"y - 2 + x", n2}, {"y - 2 - x", n2}}};
      }
      s.report_targets = {"2 - x"};
      out.push_back(std::move(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables

struct StoredTable {
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> rows;
  std::vector<std::vector<std::vector<std::string>>> cells;
};

const StoredTable &table1() {
  static const StoredTable t{
      {"1 - x", "1 + 5*x", "1 - 5*x", "1 + 1/5*x", "1 - 1/5*x"},
      kRowsA,
      {
          {{"1", "-1"}, {"1"}, {"1"}, {"1"}, {"1"}},
          {{"-1"}, {"-5"}, {"1", "-1"}, {"-1", "5"}, {"1", "-1"}},
          {{"1"}, {"1", "-1"}, {"1", "-5"}, {"1"}, {"-1", "5"}},
          {{"1", "-5"}, {"-1"}, {"1", "-5"}, {"5", "-5"}, {"-5"}},
          {{"1", "-1"}, {"1", "-5"}, {"1"}, {"1"}, {"1"}},
          {{"-1"}, {"-5"}, {"1", "-1"}, {"1", "-5"}, {"1"}},
          {{"1", "-5"}, {"1", "-1"}, {"1"}, {"1"}, {"1", "-5"}},
          {{"1", "-5"}, {"1", "-1"}, {"1", "-5"}, {"1", "-1"}, {"-5"}},
      }};
  return t;
}

const StoredTable &table3() {
  static const StoredTable t{
      {"1 - x", "1 + 2*x", "1 - 2*x", "2 + x", "2 - x"},
      kRowsB,
      {
          {{"1", "-1"}, {"1"}, {"1", "-1"}, {"2"}, {"2", "-2"}},
          {{"1"}, {"-2"}, {"1"}, {"-1", "2"}, {"2"}},
          {{"1", "-2"}, {"1", "-1"}, {"1", "-2"}, {"2"}, {"-1", "2"}},
          {{"1"}, {"-1"}, {"1"}, {"2", "-2"}, {"2"}},
          {{"1", "-1"}, {"1", "-2"}, {"1", "-1"}, {"2"}, {"2", "-2"}},
          {{"1"}, {"-2"}, {"1"}, {"1", "-2"}, {"2"}},
          {{"1", "-2"}, {"1", "-1"}, {"1", "-2"}, {"2"}, {"-1", "2"}},
          {{"1"}, {"-1"}, {"1"}, {"2", "-2"}, {"2"}},
      }};
  return t;
}

CaseSpec table1_spec(std::size_t row, const ReplayOptions &opts) {
  const StoredTable &t = table1();
  const Scenario sc = case_a(opts);
  const auto &[cx, c1] = t.rows[row];
  CaseSpec s{"table-1", case_label({{"x", cx}, {"1+x", c1}}), sc};
  add_hypotheses(s, "x", cx, c1, "hypothesis");
  add_case_a_closure(s, "x");
  s.universe = one_plus_items("x", kCoefsA);
  for (std::size_t k = 0; k < t.columns.size(); ++k)
    s.cells.push_back({t.columns[k], set_of(sc.basis(), t.cells[row][k])});
  return s;
}

CaseSpec table3_spec(std::size_t row, ScenarioId branch) {
  const StoredTable &t = table3();
  const Scenario sc(branch);
  const auto &[cx, c1] = t.rows[row];
  CaseSpec s{"table-3", branch_name(branch) + ": " + case_label({{"x", cx}, {"1+x", c1}}),
             sc};
  add_hypotheses(s, "x", cx, c1, "hypothesis");
  add_case_b_closure(s, "x");
  s.universe = one_plus_items("x", kCoefsB);
  for (const char *e : {"1 + 1/2*x", "1 - 1/2*x", "3 + x", "3 - x", "1 + c*x", "1 - c*x"})
    s.universe.push_back(e);
  for (std::size_t k = 0; k < t.columns.size(); ++k)
    s.cells.push_back({t.columns[k], set_of(sc.basis(), t.cells[row][k])});
  return s;
}

std::vector<ClassSet> table_cells(const CaseReport &r, const std::vector<std::string> &cols,
                                  const AtomNames &names) {
  std::vector<ClassSet> out;
  for (const auto &c : cols) {
    const std::string key = parse_expr(c, names).str(names);
    for (const auto &t : r.targets)
      if (t.expr == key)
        out.push_back(t.derived);
  }
  return out;
}

struct Table2Row {
  ScenarioId branch;
  std::array<const char *, 3> cells; // c-2, c-3, c-4
  const char *three;
};
const std::vector<Table2Row> kTable2 = {{ScenarioId::CaseB3is2, {"-2", "-2", "-1"}, "2"},
                                        {ScenarioId::CaseB3is1, {"-2", "-1", "-1"}, "1"}};

/// Treat c as an atom t with t ~ c, t-1 ~ 1, t-2 ~ -2 and see what the
/// calculus says about t-3 and t-4.
std::vector<std::string> table2_experiment(const ReplayOptions &opts) {
  std::vector<std::string> notes;
  const std::vector<std::pair<ScenarioId, std::string>> runs = {
      {ScenarioId::CaseBOpen, "3 open"},
      {ScenarioId::CaseB3is2, "3~2"},
      {ScenarioId::CaseB3is1, "3~1"}};
  for (LatticeScenario ls : {LatticeScenario::CaseBK, LatticeScenario::CaseBk}) {
    for (const auto &[id, name] : runs) {
      const Scenario sc(id, lattice(ls));
      const Basis B = sc.basis();
      KnowledgeBase kb(sc, AtomNames{"t", "y"});
      kb.add("t", set_of(B, {"c"}), "t stands for c");
      kb.add("t - 1", set_of(B, {"1"}), "stored");
      kb.add("t - 2", set_of(B, {"-2"}), "stored");
      for (const char *e : {"t - 3", "t - 4", "t + 1", "t + 2", "2*t - 1", "t - 6", "t - 8"})
        kb.add(e);
      EngineOptions eo;
      eo.depth = opts.depth;
      eo.record_trace = false;
      eo.refine_split_depth = 1;
      const ProofResult r = refine(kb, eo);
      std::string line = std::string(to_string(ls)) + ", " + name + ": ";
      if (r.status == Outcome::Contradiction) {
        line += "hypotheses contradictory";
      } else {
        line += "t - 3 in " + r.set(kb, kb.find(parse_expr("t - 3", kb.names()))).str() +
                ", t - 4 in " + r.set(kb, kb.find(parse_expr("t - 4", kb.names()))).str();
      }
      notes.push_back(line);
    }
  }
  return notes;
}

std::vector<CaseReport> replay_table2(const ReplayOptions &opts) {
  std::vector<CaseReport> out;
  const auto notes = table2_experiment(opts);
  for (const auto &row : kTable2) {
    const Scenario sc(row.branch);
    const Basis B = sc.basis();
    CaseReport r;
    r.theorem = "table-2";
    r.label = branch_name(row.branch);
    r.scenario = std::string(to_string(row.branch));
    r.hypotheses.push_back({"3", set_of(B, {row.three})});
    bool ok = sc.scalar_class(Scalar(3)) == cls(B, row.three);
    const Scalar c = Scalar::c();
    ok &= sc.scalar_class(c - Scalar(1)) == SquareClass::one(B);
    for (int k = 0; k < 3; ++k) {
      const Scalar e = c - Scalar(k + 2);
      const auto got = sc.scalar_class(e);
      const ClassSet stored = set_of(B, {row.cells[k]});
      r.targets.push_back({"c - " + std::to_string(k + 2),
                           got ? ClassSet::single(*got) : ClassSet::full(B), stored});
      ok &= got && *got == cls(B, row.cells[k]);
    }
    r.status = ok ? "proved" : "failed";
    r.notes.push_back("stored input; experiment with c as an atom:");
    r.notes.insert(r.notes.end(), notes.begin(), notes.end());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CaseReport> run_specs(const std::vector<CaseSpec> &specs,
                                  const ReplayOptions &opts) {
  std::vector<CaseReport> out;
  out.reserve(specs.size());
  for (const auto &s : specs)
    out.push_back(run_case(s, opts));
  return out;
}

std::vector<CaseReport> replay_table3(const ReplayOptions &opts) {
  std::vector<CaseReport> out;
  const StoredTable &t = table3();
  for (ScenarioId br : kBranches)
    for (std::size_t row = 0; row < t.rows.size(); ++row)
      out.push_back(run_case(table3_spec(row, br), opts));
  // The two branches must agree cell by cell.
  const std::size_t n = t.rows.size();
  for (std::size_t row = 0; row < n; ++row) {
    const auto a = table_cells(out[row], t.columns, {});
    const auto b = table_cells(out[n + row], t.columns, {});
    if (a != b) {
      for (auto *r : {&out[row], &out[n + row]}) {
        r->notes.push_back("derived cells differ between the branches of 3");
      }
    }
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string> &registry() {
  static const std::vector<std::string> ids = {
      "lemma-4.4",          "cor-4.5",           "prop-4.6",   "lemma-4.8",
      "appendix-B",         "case-b-units-3sim2", "case-b-units-3sim1",
      "table-1",            "table-2",           "table-3",    "case-b-oneminusxy",
      "case-b-residue-2"};
  return ids;
}

std::vector<CaseReport> replay(const std::string &theorem, const ReplayOptions &opts) {
  if (theorem == "lemma-4.4")
    return run_specs(lemma44_specs(opts), opts);
  if (theorem == "cor-4.5")
    return {replay_cor45(opts)};
  if (theorem == "prop-4.6") {
    auto out = run_specs(prop46_specs(opts), opts);
    const CoverageResult cov = prop46_coverage(opts);
    CaseReport r;
    r.theorem = "prop-4.6";
    r.label = "coverage of all hypothesis combinations";
    r.scenario = "case-a";
    r.status = cov.ok() ? "proved" : "failed";
    std::ostringstream os;
    os << cov.combinations << " combinations: " << cov.immediate << " immediate, "
       << cov.listed << " listed, " << cov.swapped << " by symmetry, " << cov.scaled
       << " by unit scaling, " << cov.uncovered.size() << " uncovered";
    r.notes.push_back(os.str());
    for (const auto &u : cov.uncovered)
      r.notes.push_back("uncovered: " + u);
    out.push_back(std::move(r));
    return out;
  }
  if (theorem == "lemma-4.8")
    return run_specs(lemma48_specs(opts), opts);
  if (theorem == "appendix-B")
    return run_specs(appendix_b_specs(opts), opts);
  if (theorem == "case-b-units-3sim2")
    return run_specs(case_b_units_specs(ScenarioId::CaseB3is2), opts);
  if (theorem == "case-b-units-3sim1")
    return run_specs(case_b_units_specs(ScenarioId::CaseB3is1), opts);
  if (theorem == "table-1") {
    std::vector<CaseSpec> specs;
    for (std::size_t row = 0; row < table1().rows.size(); ++row)
      specs.push_back(table1_spec(row, opts));
    return run_specs(specs, opts);
  }
  if (theorem == "table-2")
    return replay_table2(opts);
  if (theorem == "table-3")
    return replay_table3(opts);
  if (theorem == "case-b-oneminusxy")
    return run_specs(case_b_oneminusxy_specs(), opts);
  if (theorem == "case-b-residue-2")
    return run_specs(case_b_residue_specs(), opts);
  throw Error(ErrorKind::UnknownTheorem, "no theorem '" + theorem + "' in the registry");
}

bool CaseReport::ok() const {
  if (trace_failures || (oracle && !oracle->violations.empty()))
    return false;
  if (status == "hypothesis-impossible")
    return scenario != "case-a";
  return status == "proved";
}

bool ReplaySummary::ok() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CaseReport &r) { return r.ok(); });
}

ReplaySummary replay_all(const ReplayOptions &opts, const std::vector<std::string> &filter) {
  ReplaySummary s;
  const auto start = std::chrono::steady_clock::now();
  const auto &ids = filter.empty() ? registry() : filter;
  for (const auto &id : ids) {
    TheoremSummary ts;
    ts.theorem = id;
    for (auto &r : replay(id, opts)) {
      if (r.status == "proved")
        ++ts.proved;
      else if (r.status == "stuck")
        ++ts.stuck;
      else if (r.status == "hypothesis-impossible")
        ++ts.impossible;
      else
        ++ts.failed;
      ts.trace_failures += r.trace_failures;
      if (r.oracle)
        ts.oracle_violations += r.oracle->violations.size();
      s.reports.push_back(std::move(r));
    }
    s.theorems.push_back(ts);
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

TableResult generate_table(int id, const ReplayOptions &opts0) {
  ReplayOptions opts = opts0;
  TableResult out;
  out.id = id;
  if (id == 2) {
    out.columns = {"3", "c - 2", "c - 3", "c - 4"};
    bool ok = true;
    for (const auto &row : kTable2) {
      const Scenario sc(row.branch);
      TableRow tr;
      tr.x = branch_name(row.branch);
      const Basis B = sc.basis();
      tr.stored.push_back(set_of(B, {row.three}));
      for (const char *c : row.cells)
        tr.stored.push_back(set_of(B, {c}));
      std::vector<ClassSet> got;
      for (int k : {-1, 2, 3, 4}) {
        const Scalar e = k < 0 ? Scalar(3) : Scalar::c() - Scalar(k);
        const auto c = sc.scalar_class(e);
        got.push_back(c ? ClassSet::single(*c) : ClassSet::full(B));
      }
      tr.contained = got == tr.stored;
      ok &= tr.contained;
      tr.derived[std::string(to_string(row.branch))] = got;
      out.rows.push_back(std::move(tr));
    }
    out.notes = table2_experiment(opts);
    out.ok = ok;
    return out;
  }
  if (id != 1 && id != 3)
    throw Error(ErrorKind::InvalidArgument, "tables are numbered 1 to 3");
  const StoredTable &t = id == 1 ? table1() : table3();
  out.columns = t.columns;
  bool ok = true;
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    TableRow tr;
    tr.x = t.rows[row].first;
    tr.one_plus_x = t.rows[row].second;
    const Basis B = id == 1 ? Basis::CaseA : Basis::CaseB;
    for (const auto &c : t.cells[row])
      tr.stored.push_back(set_of(B, c));
    std::vector<ScenarioId> runs =
        id == 1 ? std::vector<ScenarioId>{ScenarioId::CaseA} : kBranches;
    tr.contained = true;
    for (ScenarioId br : runs) {
      const CaseReport r =
          run_case(id == 1 ? table1_spec(row, opts) : table3_spec(row, br), opts);
      const auto cells = table_cells(r, t.columns, {});
      for (std::size_t k = 0; k < cells.size(); ++k)
        tr.contained &= !cells[k].is_empty() && cells[k].subset_of(tr.stored[k]);
      tr.contained &= r.trace_failures == 0;
      tr.derived[std::string(to_string(br))] = cells;
    }
    if (id == 3) {
      const auto &d = tr.derived;
      if (d.at("case-b-3is1") != d.at("case-b-3is2"))
        out.identical_across_branches = false;
    }
    ok &= tr.contained;
    out.rows.push_back(std::move(tr));
  }
  out.ok = ok && out.identical_across_branches;
  return out;
}

CoverageResult prop46_coverage(const ReplayOptions &opts) {
  CoverageResult out;
  const NormLattice &L = opts.case_a_lattice;
  const Basis B = Basis::CaseA;
  const ClassSet n5 = L.norm_group(cls(B, "5"));
  const TableResult t1 = generate_table(1, opts);
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::set<Key> listed(kProp46Cases.begin(), kProp46Cases.end());
  auto immediate = [&](const std::string &cx, const std::string &cy) {
    const SquareClass q = SquareClass::minus_one(B) * cls(B, cx) * cls(B, cy);
    const SumRuleResult r = sum_rule(L, SquareClass::one(B), q);
    return !r.may_vanish && r.classes.subset_of(n5);
  };
  auto row_of = [&](const std::string &cx, const std::string &c1) -> const TableRow * {
    for (const auto &r : t1.rows)
      if (r.x == cx && r.one_plus_x == c1)
        return &r;
    return nullptr;
  };
  auto covered = [&](const Key &k) {
    const auto &[a, b, c, d] = k;
    return immediate(a, c) || listed.count(k) || listed.count({c, d, a, b});
  };
  for (const auto &[cx, c1x] : kRowsA)
    for (const auto &[cy, c1y] : kRowsA) {
      ++out.combinations;
      const Key k{cx, c1x, cy, c1y};
      const std::string name = case_label({{"x", cx}, {"1+x", c1x}, {"y", cy}, {"1+y", c1y}});
      if (immediate(cx, cy)) {
        ++out.immediate;
        continue;
      }
      if (listed.count(k)) {
        ++out.listed;
        continue;
      }
      if (listed.count({cy, c1y, cx, c1x})) {
        ++out.swapped;
        continue;
      }
      // Scale x by a unit a with a*x ~ 2 and y by 1/a.
      bool done = false;
      for (const auto &[a, col] :
           std::vector<std::pair<std::string, std::pair<int, int>>>{
               {"-1", {0, 0}}, {"5", {1, 3}}, {"-5", {2, 4}}}) {
        if ((cls(B, a) * cls(B, cx)) != cls(B, "2"))
          continue;
        const TableRow *rx = row_of(cx, c1x);
        const TableRow *ry = row_of(cy, c1y);
        if (!rx || !ry)
          break;
        const ClassSet sx = rx->derived.at("case-a")[col.first];
        const ClassSet sy = ry->derived.at("case-a")[col.second];
        const std::string ny = (cls(B, a) * cls(B, cy)).label();
        bool all = !sx.is_empty() && !sy.is_empty();
        for (const auto &p : sx.members())
          for (const auto &q : sy.members())
            all &= covered(Key{"2", p.label(), ny, q.label()});
        done = all;
        break;
      }
      if (done)
        ++out.scaled;
      else
        out.uncovered.push_back(name);
    }
  return out;
}

// ---------------------------------------------------------------------------
// JSON and markdown

json to_json(const CaseReport &r) {
  json hyp = json::array();
  for (const auto &[e, s] : r.hypotheses)
    hyp.push_back({{"expr", e}, {"set", s.labels()}});
  json targets = json::array();
  for (const auto &t : r.targets) {
    json j = {{"expr", t.expr}, {"derived", t.derived.labels()}};
    if (t.goal)
      j["goal"] = t.goal->labels();
    if (t.stored) {
      j["stored"] = t.stored->labels();
      j["contained"] = !t.derived.is_empty() && t.derived.subset_of(*t.stored);
    }
    targets.push_back(j);
  }
  json pinned = json::array();
  for (const auto &p : r.pinned)
    pinned.push_back({{"expr", p.expr},
                      {"expected", p.expected.labels()},
                      {"derived", p.derived.labels()},
                      {"ok", p.ok}});
  json out = {{"theorem", r.theorem},
              {"case", r.label},
              {"scenario", r.scenario},
              {"hypotheses", hyp},
              {"targets", targets},
              {"status", r.status},
              {"pinned", pinned},
              {"notes", r.notes},
              {"trace_check",
               {{"traces", r.traces},
                {"failures", r.trace_failures},
                {"messages", r.trace_messages}}}};
  if (!r.trace_json.empty())
    out["traces"] = r.trace_json;
  if (r.oracle)
    out["oracle"] = {{"samples", r.oracle->samples},
                     {"zero_or_imprecise", r.oracle->zero_values},
                     {"unsatisfiable_at_budget", r.oracle->unsatisfiable_at_budget},
                     {"violations", r.oracle->violations}};
  return out;
}

json to_json(const ReplaySummary &s) {
  json th = json::array();
  for (const auto &t : s.theorems)
    th.push_back({{"theorem", t.theorem},
                  {"proved", t.proved},
                  {"stuck", t.stuck},
                  {"hypothesis_impossible", t.impossible},
                  {"failed", t.failed},
                  {"trace_failures", t.trace_failures},
                  {"oracle_violations", t.oracle_violations}});
  json reports = json::array();
  for (const auto &r : s.reports)
    reports.push_back(to_json(r));
  return {{"theorems", th}, {"seconds", s.seconds}, {"ok", s.ok()}, {"reports", reports}};
}

json to_json(const TableResult &t) {
  json rows = json::array();
  for (const auto &r : t.rows) {
    json stored = json::array();
    for (const auto &c : r.stored)
      stored.push_back(c.labels());
    json derived = json::object();
    for (const auto &[k, cells] : r.derived) {
      json a = json::array();
      for (const auto &c : cells)
        a.push_back(c.labels());
      derived[k] = a;
    }
    rows.push_back({{"x", r.x},
                    {"1+x", r.one_plus_x},
                    {"stored", stored},
                    {"derived", derived},
                    {"contained", r.contained}});
  }
  json out = {{"table", t.id}, {"columns", t.columns}, {"rows", rows}, {"ok", t.ok}};
  if (t.id == 3)
    out["identical_across_branches"] = t.identical_across_branches;
  if (!t.notes.empty())
    out["notes"] = t.notes;
  return out;
}

namespace {
std::string cell_text(const ClassSet &s) {
  std::string out;
  for (const auto &l : s.labels())
    out += (out.empty() ? "" : ",") + l;
  return out.empty() ? "(empty)" : out;
}
} // namespace

std::string render_markdown(const TableResult &t) {
  std::ostringstream os;
  os << "Table " << t.id << "\n\n";
  if (t.id == 2) {
    os << "| 3 | c - 2 | c - 3 | c - 4 |\n|---|---|---|---|\n";
    for (const auto &r : t.rows) {
      os << "|";
      for (const auto &c : r.stored)
        os << " " << cell_text(c) << " |";
      os << "\n";
    }
    for (const auto &n : t.notes)
      os << "\n- " << n;
    os << "\n";
    return os.str();
  }
  os << "| x | 1+x |";
  for (const auto &c : t.columns)
    os << " " << c << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << "---|";
  os << "\n";
  for (const auto &r : t.rows) {
    for (const auto &[run, cells] : r.derived) {
      os << "| " << r.x << " | " << r.one_plus_x << " |";
      for (std::size_t k = 0; k < cells.size(); ++k) {
        os << " " << cell_text(cells[k]);
        if (cells[k] != r.stored[k])
          os << " (stored " << cell_text(r.stored[k]) << ")";
        os << " |";
      }
      if (r.derived.size() > 1)
        os << " " << run;
      os << "\n";
    }
  }
  os << "\ncontained: " << (t.ok ? "yes" : "no");
  if (t.id == 3)
    os << ", identical across branches: " << (t.identical_across_branches ? "yes" : "no");
  os << "\n";
  return os.str();
}

} // namespace normcomb
