#include "normcomb/trace.hpp"

#include <set>
#include <stdexcept>

#include "normcomb/derivation.hpp"
#include "normcomb/error.hpp"
#include "normcomb/poly.hpp"

namespace normcomb {

NormLattice lattice_from_json(const nlohmann::json &j) {
  try {
    const auto scenario = parse_lattice_scenario(j.at("scenario").get<std::string>());
    const ClassGroup G(scenario == LatticeScenario::CaseA ? Basis::CaseA : Basis::CaseB);
    std::array<std::uint8_t, 8> groups{};
    groups[0] = 0xFF;
    for (const auto &[label, members] : j.at("groups").items()) {
      const SquareClass a = parse_class(label, G);
      groups[a.bits()] =
          parse_class_set(members.get<std::vector<std::string>>(), G).mask();
    }
    return NormLattice(scenario, groups);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Parse, std::string("bad lattice json: ") + e.what());
  }
}

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Entry {
  std::string key;
  RationalFunction f;
  std::uint8_t mask = 0xFF;
};
using State = std::vector<Entry>;

class Checker {
public:
  explicit Checker(const nlohmann::json &t)
      : lattice_(lattice_from_json(t.at("lattice"))),
        scenario_(parse_scenario(t.at("scenario").get<std::string>()), lattice_),
        group_(lattice_.group()) {
    if (t.contains("goal_mode"))
      all_mode_ = t.at("goal_mode").get<std::string>() == "all";
    for (const auto &g : t.at("goal"))
      goal_.push_back({g.at("expr").get<std::string>(),
                       parse(g.at("expr").get<std::string>()), set_of(g.at("set"))});
  }

  State initial(const nlohmann::json &facts) {
    State s;
    for (const auto &f : facts) {
      const std::string key = f.at("expr").get<std::string>();
      const RationalFunction rf = parse(key);
      if (rf.is_zero())
        fail("fact about the zero expression " + key);
      const std::uint8_t m = set_of(f.at("set"));
      const int i = find(s, key, rf);
      if (i >= 0)
        s[i].mask &= m;
      else
        s.push_back({key, rf, m});
    }
    return s;
  }

  Outcome run(State &s, const nlohmann::json &steps) {
    const std::size_t n = steps.size();
    for (std::size_t k = 0; k < n; ++k) {
      const auto &st = steps[k];
      ++checked_;
      const std::string kind = st.at("kind").get<std::string>();
      const bool last = k + 1 == n;
      if (kind == "decompose") {
        if (decompose(s, st)) {
          if (!last)
            fail("steps continue after a contradiction");
          return Outcome::Contradiction;
        }
      } else if (kind == "refute") {
        refute(s, st);
      } else if (kind == "split") {
        if (!last)
          fail("a split must be the last step of its sequence");
        return split(s, st);
      } else if (kind == "identity") {
        if (!verify_identity(parse(st.at("lhs")), parse(st.at("rhs"))))
          fail("identity fails: " + st.at("lhs").get<std::string>() +
               " = " + st.at("rhs").get<std::string>());
      } else if (kind == "classcalc") {
        classcalc(s, st);
      } else if (kind == "apply") {
        apply(s, st);
      } else if (kind == "establish") {
        establish(s, st);
      } else {
        fail("unknown step kind '" + kind + "'");
      }
    }
    return goal_satisfied(s) ? Outcome::Proved : Outcome::Stuck;
  }

  std::size_t checked() const { return checked_; }

  [[noreturn]] static void fail(const std::string &msg) { throw CheckFailure(msg); }

private:
  struct GoalAlt {
    std::string key;
    RationalFunction f;
    std::uint8_t mask;
  };

  RationalFunction parse(const nlohmann::json &text) const {
    return parse_rational_function(text.get<std::string>());
  }
  RationalFunction parse(const std::string &text) const {
    return parse_rational_function(text);
  }

  std::uint8_t set_of(const nlohmann::json &labels) const {
    return parse_class_set(labels.get<std::vector<std::string>>(), group_).mask();
  }
  std::string show(std::uint8_t m) const { return ClassSet(group_.basis(), m).str(); }

  static int find(const State &s, const std::string &key, const RationalFunction &f) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].key == key)
        return static_cast<int>(i);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (verify_identity(s[i].f, f))
        return static_cast<int>(i);
    return -1;
  }

  int require(const State &s, const std::string &key) const {
    const int i = find(s, key, parse(key));
    if (i < 0)
      fail("no fact about " + key);
    return i;
  }

  /// Class of a constant (rational function of c only), or nullopt.
  std::optional<SquareClass> constant_class(const RationalFunction &f) const {
    for (const auto *p : {&f.num, &f.den})
      if (!p->only_uses({"c"}))
        return std::nullopt;
    return scenario_.ratio_class(to_scalar_ratio(f));
  }

  /// Set of a factor: a tracked fact or a constant.
  std::uint8_t factor_set(const State &s, const std::string &key) const {
    const RationalFunction f = parse(key);
    const int i = find(s, key, f);
    if (i >= 0)
      return s[i].mask;
    const auto c = constant_class(f);
    if (!c)
      fail("factor " + key + " has no known class");
    return ClassSet::single(*c).mask();
  }

  std::uint8_t sum_sets(std::uint8_t a, std::uint8_t b) const {
    ClassSet out = ClassSet::empty(group_.basis());
    const Basis B = group_.basis();
    for (const auto &p : ClassSet(B, a).members())
      for (const auto &q : ClassSet(B, b).members())
        out = set_union(out, sum_rule(lattice_, p, q).classes);
    return out.mask();
  }

  void expect_set(const nlohmann::json &st, const char *field, std::uint8_t computed,
                  const std::string &where) const {
    const std::uint8_t recorded = set_of(st.at(field));
    if (recorded != computed)
      fail(where + ": recorded " + field + " " + show(recorded) + " but recomputed " +
           show(computed));
  }

  /// true if the target became empty
  bool decompose(State &s, const nlohmann::json &st) {
    const std::string target = st.at("target").get<std::string>();
    const std::string where = "decompose " + target;
    const RationalFunction T = parse(target);
    RationalFunction total{Poly(), Poly(Rational(1))};
    std::vector<std::uint8_t> term_sets;
    const auto &terms = st.at("terms");
    if (terms.empty() || terms.size() > 2)
      fail(where + ": expected one or two terms");
    for (const auto &term : terms) {
      const RationalFunction coef = parse(term.at("coef"));
      const auto cc = constant_class(coef);
      if (!cc)
        fail(where + ": coefficient " + term.at("coef").get<std::string>() +
             " has no known class");
      RationalFunction value = coef;
      ClassSet set = ClassSet::single(SquareClass::one(group_.basis()));
      for (const auto &f : term.at("factors")) {
        const std::string fk = f.get<std::string>();
        value = value * parse(fk);
        set = product_set(set, ClassSet(group_.basis(), s[require(s, fk)].mask));
      }
      total = total + value;
      term_sets.push_back(coset(*cc, set).mask());
    }
    if (!verify_identity(T, total))
      fail(where + ": the terms do not add up to the target");
    const std::uint8_t result =
        term_sets.size() == 1 ? term_sets[0] : sum_sets(term_sets[0], term_sets[1]);
    expect_set(st, "result", result, where);
    const int i = require(s, target);
    expect_set(st, "before", s[i].mask, where);
    const std::uint8_t after = s[i].mask & result;
    expect_set(st, "after", after, where);
    s[i].mask = after;
    return after == 0;
  }

  void refute(State &s, const nlohmann::json &st) {
    const std::string e = st.at("expr").get<std::string>();
    const std::string where = "refute " + e;
    const int i = require(s, e);
    expect_set(st, "before", s[i].mask, where);
    const SquareClass cand = parse_class(st.at("candidate").get<std::string>(), group_);
    const std::uint8_t bit = ClassSet::single(cand).mask();
    if (!(s[i].mask & bit))
      fail(where + ": candidate is not in the current set");
    State trial = s;
    trial[i].mask = bit;
    const auto saved = std::move(goal_);
    goal_.clear();
    Outcome o;
    try {
      o = run(trial, st.at("steps"));
    } catch (...) {
      goal_ = saved;
      throw;
    }
    goal_ = saved;
    if (o != Outcome::Contradiction)
      fail(where + ": sub-derivation for " + cand.label() + " does not reach a contradiction");
    const std::uint8_t after = s[i].mask & ~bit;
    expect_set(st, "after", after, where);
    s[i].mask = after;
  }

  Outcome split(State &s, const nlohmann::json &st) {
    const std::string e = st.at("expr").get<std::string>();
    const std::string where = "split " + e;
    const int i = require(s, e);
    if (st.contains("before"))
      expect_set(st, "before", s[i].mask, where);
    std::uint8_t covered = 0;
    bool any_alive = false, any_stuck = false;
    for (const auto &c : st.at("cases")) {
      const SquareClass cand = parse_class(c.at("candidate").get<std::string>(), group_);
      const std::uint8_t bit = ClassSet::single(cand).mask();
      if (!(s[i].mask & bit) || (covered & bit))
        fail(where + ": bad case " + cand.label());
      covered |= bit;
      State child = s;
      child[i].mask = bit;
      const Outcome o = run(child, c.at("steps"));
      if (std::string(to_string(o)) != c.at("outcome").get<std::string>())
        fail(where + " = " + cand.label() + ": recorded outcome " +
             c.at("outcome").get<std::string>() + " but recomputed " +
             std::string(to_string(o)));
      any_alive |= o != Outcome::Contradiction;
      any_stuck |= o == Outcome::Stuck;
    }
    if (covered != s[i].mask)
      fail(where + ": the cases do not cover " + show(s[i].mask));
    return !any_alive ? Outcome::Contradiction
                      : any_stuck ? Outcome::Stuck : Outcome::Proved;
  }

  bool goal_satisfied(const State &s) const {
    if (goal_.empty())
      return false;
    for (const auto &g : goal_) {
      const int i = find(s, g.key, g.f);
      const bool ok = i >= 0 && s[i].mask != 0 && (s[i].mask & ~g.mask) == 0;
      if (ok && !all_mode_)
        return true;
      if (!ok && all_mode_)
        return false;
    }
    return all_mode_;
  }

  void put(State &s, const std::string &key, std::uint8_t mask) {
    const RationalFunction f = parse(key);
    const int i = find(s, key, f);
    if (i >= 0)
      s[i].mask &= mask;
    else
      s.push_back({key, f, mask});
  }

  void classcalc(State &s, const nlohmann::json &st) {
    const std::string e = st.at("expr").get<std::string>();
    const std::string where = "classcalc " + e;
    RationalFunction prod{Poly(Rational(1)), Poly(Rational(1))};
    ClassSet set = ClassSet::single(SquareClass::one(group_.basis()));
    for (const auto &f : st.at("factors")) {
      const std::string fk = f.at("expr").get<std::string>();
      const int ex = f.value("exp", 1);
      const RationalFunction rf = parse(fk);
      if (ex == 1)
        prod = prod * rf;
      else if (ex == -1)
        prod = prod / rf;
      else
        fail(where + ": exponents must be 1 or -1");
      set = product_set(set, ClassSet(group_.basis(), factor_set(s, fk)));
    }
    if (!verify_identity(parse(e), prod))
      fail(where + ": the factors do not multiply to the expression");
    expect_set(st, "result", set.mask(), where);
    put(s, e, set.mask());
  }

  /// The norm group N(g) named by a step and its complement.
  std::pair<std::uint8_t, std::uint8_t> norm_sets(const nlohmann::json &st) const {
    const SquareClass g = parse_class(st.at("norm").get<std::string>(), group_);
    const std::uint8_t n = lattice_.norm_group(g).mask();
    return {n, static_cast<std::uint8_t>(~n)};
  }

  void require_member(const State &s, const std::string &z, std::uint8_t n,
                      std::uint8_t comp, const std::string &where) const {
    const int iz = require(s, z);
    const int ip = require(s, "1 + (" + z + ")");
    if ((s[iz].mask & ~comp) != 0)
      fail(where + ": " + z + " is not known to lie outside the norm group");
    if ((s[ip].mask & ~n) != 0)
      fail(where + ": 1 + " + z + " is not known to be a norm");
  }

  void apply(State &s, const nlohmann::json &st) {
    const std::string rule = st.at("rule").get<std::string>();
    const std::string z = st.at("atom").get<std::string>();
    const std::string where = "apply " + rule + " to " + z;
    const auto [n, comp] = norm_sets(st);
    require_member(s, z, n, comp, where);
    std::vector<std::pair<RationalFunction, std::uint8_t>> expected;
    const RationalFunction zf = parse(z);
    const RationalFunction one{Poly(Rational(1)), Poly(Rational(1))};
    auto constant = [](std::int64_t k) {
      return RationalFunction{Poly(Rational(k)), Poly(Rational(1))};
    };
    if (rule == "lemma-4.4") {
      expected.push_back({one + constant(2) * zf, n});
      expected.push_back({one + constant(4) * zf, n});
    } else if (rule == "unit") {
      const std::string a = st.at("unit").get<std::string>();
      if (!established_.count(a))
        fail(where + ": unit " + a + " has not been established");
      const RationalFunction af = parse(a);
      const auto ca = constant_class(af);
      if (!ca)
        fail(where + ": unit has no known class");
      const int iz = require(s, z);
      expected.push_back({af * zf, coset(*ca, ClassSet(group_.basis(), s[iz].mask)).mask()});
      expected.push_back({one + af * zf, n});
    } else {
      fail("unknown rule '" + rule + "'");
    }
    const auto &concl = st.at("conclusions");
    if (concl.size() != expected.size())
      fail(where + ": wrong number of conclusions");
    for (std::size_t k = 0; k < expected.size(); ++k) {
      const std::string key = concl[k].at("expr").get<std::string>();
      if (!verify_identity(parse(key), expected[k].first))
        fail(where + ": conclusion " + key + " does not match the rule");
      expect_set(concl[k], "set", expected[k].second, where);
      put(s, key, expected[k].second);
    }
  }

  void establish(State &s, const nlohmann::json &st) {
    const std::string a = st.at("unit").get<std::string>();
    const std::string x = st.at("atom").get<std::string>();
    const std::string where = "establish " + a;
    const auto [n, comp] = norm_sets(st);
    // x must be a generic member: its hypotheses are exactly the definition.
    {
      const int ix = require(s, x);
      const int ip = require(s, "1 + (" + x + ")");
      if (initial_mask(ix) != comp || initial_mask(ip) != n)
        fail(where + ": " + x + " carries hypotheses beyond membership");
    }
    const std::string ax = "(" + a + ")*(" + x + ")";
    const int iax = require(s, ax);
    const int ip = require(s, "1 + " + ax);
    if ((s[iax].mask & ~comp) != 0 || (s[ip].mask & ~n) != 0)
      fail(where + ": " + ax + " is not shown to be a member");
    established_.insert(a);
  }

  std::uint8_t initial_mask(int i) const {
    return i < static_cast<int>(initial_.size()) ? initial_[i] : 0;
  }

public:
  void remember_initial(const State &s) {
    for (const auto &e : s)
      initial_.push_back(e.mask);
  }

private:
  NormLattice lattice_;
  Scenario scenario_;
  ClassGroup group_;
  std::vector<GoalAlt> goal_;
  bool all_mode_ = false;
  std::set<std::string> established_;
  std::vector<std::uint8_t> initial_;
  std::size_t checked_ = 0;
};

} // namespace

TraceCheck check_trace(const nlohmann::json &trace) {
  TraceCheck out;
  try {
    Checker ch(trace);
    State s = ch.initial(trace.at("facts"));
    ch.remember_initial(s);
    const Outcome o = ch.run(s, trace.at("steps"));
    out.steps_checked = ch.checked();
    const std::string recorded = trace.at("outcome").get<std::string>();
    if (recorded != to_string(o)) {
      out.message = "recorded outcome " + recorded + " but recomputed " +
                    std::string(to_string(o));
      return out;
    }
    out.ok = true;
    out.message = "ok";
  } catch (const CheckFailure &e) {
    out.message = e.what();
  } catch (const Error &e) {
    out.message = e.what();
  } catch (const nlohmann::json::exception &e) {
    out.message = std::string("malformed trace: ") + e.what();
  }
  return out;
}

} // namespace normcomb
