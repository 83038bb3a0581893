// normcomb: command-line front end.
//
// Exit codes: 0 success, 1 a check failed, 2 usage error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "normcomb/demushkin.hpp"
#include "normcomb/derivation.hpp"
#include "normcomb/dyadic.hpp"
#include "normcomb/error.hpp"
#include "normcomb/normlattice.hpp"
#include "normcomb/poly.hpp"
#include "normcomb/replay.hpp"

using namespace normcomb;
using json = nlohmann::json;

namespace {

struct Config {
  std::string scenario = "case-a";
  std::string format = "text";
  int precision = 64;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  int depth = 3;
  std::string mutate;
  bool oracle = false;
  std::size_t oracle_samples = 1000;
  bool traces = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool as_json(const Config &c) { return c.format == "json"; }

ScenarioId scenario_id(const Config &c) {
  try {
    const ScenarioId id = parse_scenario(c.scenario);
    if (id == ScenarioId::CaseBOpen)
      throw UsageError("scenario must be case-a, case-b-3is1 or case-b-3is2");
    return id;
  } catch (const Error &) {
    throw UsageError("unknown scenario '" + c.scenario + "'");
  }
}

NormLattice case_a_lattice(const Config &c) {
  NormLattice L = lattice(LatticeScenario::CaseA);
  if (c.mutate.empty())
    return L;
  const auto colon = c.mutate.find(':');
  if (colon == std::string::npos)
    throw UsageError("--mutate-lattice expects a:b");
  const ClassGroup G = ClassGroup::case_a();
  try {
    return L.toggled(parse_class(c.mutate.substr(0, colon), G),
                     parse_class(c.mutate.substr(colon + 1), G));
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
}

NormLattice scenario_lattice(const Config &c) {
  return scenario_id(c) == ScenarioId::CaseA ? case_a_lattice(c)
                                             : lattice(LatticeScenario::CaseBK);
}

Dyadic parse_dyadic(const std::string &text, int k) {
  try {
    return Dyadic::from_rational(Rational::parse(text), k);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::Parse)
      throw UsageError("not a rational number: '" + text + "'");
    throw;
  }
}

void print(const json &j) { std::cout << j.dump(2) << "\n"; }

int cmd_classify(const Config &c, const std::string &value) {
  const ScenarioId id = scenario_id(c);
  if (id == ScenarioId::CaseA) {
    const Dyadic d = parse_dyadic(value, c.precision);
    if (d.is_zero())
      throw Error(ErrorKind::ZeroScalar, "0 has no square class");
    const SquareClass cl = square_class_of(d);
    const Category cat = classify_in_construction(d);
    if (as_json(c))
      print({{"value", value},
             {"valuation", d.valuation()},
             {"unit_mod_8", d.unit() % 8},
             {"class", cl.label()},
             {"is_square", cl.is_one()},
             {"construction", std::string(to_string(cat))}});
    else
      std::cout << cl.label() << "\n";
    return 0;
  }
  // Case B: a rational function in c, decided by the constant table.
  const Scenario sc(id);
  ScalarRatio r;
  try {
    r = to_scalar_ratio(parse_rational_function(value));
  } catch (const Error &e) {
    throw UsageError(std::string("not a scalar in c: ") + e.what());
  }
  const auto cl = sc.ratio_class(r);
  if (as_json(c))
    print({{"value", r.str()}, {"scenario", c.scenario}, {"class", cl ? json(cl->label()) : json()}});
  else
    std::cout << (cl ? cl->label() : std::string("unknown")) << "\n";
  return cl ? 0 : 1;
}

int cmd_hilbert(const Config &c, const std::vector<std::string> &args) {
  const NormLattice L = scenario_lattice(c);
  if (args.empty()) {
    // Full 8x8 table, lattice side by side with the search oracle (Case A).
    const ClassGroup G = L.group();
    json lat = json::array(), orc = json::array();
    bool equal = true;
    if (L.basis() == Basis::CaseA) {
      const HilbertComparison hc = compare_hilbert(L);
      equal = hc.equal();
      for (int i = 0; i < 8; ++i) {
        lat.push_back(hc.lattice[i]);
        orc.push_back(hc.oracle[i]);
      }
    } else {
      for (std::uint8_t a = 0; a < 8; ++a) {
        json row = json::array();
        for (std::uint8_t b = 0; b < 8; ++b)
          row.push_back(hilbert_from_lattice(L, {L.basis(), a}, {L.basis(), b}));
        lat.push_back(row);
      }
    }
    json labels = json::array();
    for (std::uint8_t a = 0; a < 8; ++a)
      labels.push_back(std::string(G.label(a)));
    if (as_json(c)) {
      json out = {{"classes", labels}, {"lattice", lat}, {"equal", equal}};
      if (!orc.empty())
        out["oracle"] = orc;
      print(out);
    } else {
      std::cout << "      ";
      for (const auto &l : labels)
        std::cout << std::setw(5) << l.get<std::string>();
      std::cout << "\n";
      for (int i = 0; i < 8; ++i) {
        std::cout << std::setw(5) << labels[i].get<std::string>() << " ";
        for (int j = 0; j < 8; ++j)
          std::cout << std::setw(5) << lat[i][j].get<int>();
        std::cout << "\n";
      }
      if (!orc.empty())
        std::cout << "oracle agrees: " << (equal ? "yes" : "no") << "\n";
    }
    return equal ? 0 : 1;
  }
  if (args.size() != 2)
    throw UsageError("hilbert takes two values (or none for the full table)");
  int h = 0;
  if (L.basis() == Basis::CaseA) {
    try {
      h = hilbert_oracle(parse_dyadic(args[0], c.precision), parse_dyadic(args[1], c.precision), L);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::OracleMismatch)
        throw;
      std::cerr << e.what() << "\n";
      return 1;
    }
  } else {
    try {
      h = hilbert_from_lattice(L, parse_class(args[0], L.group()), parse_class(args[1], L.group()));
    } catch (const Error &e) {
      throw UsageError(e.what());
    }
  }
  if (as_json(c))
    print({{"a", args[0]}, {"b", args[1]}, {"hilbert", h}});
  else
    std::cout << (h > 0 ? "+1" : "-1") << "\n";
  return 0;
}

int cmd_lattice(const Config &c, const std::string &name) {
  NormLattice L = name.empty() ? scenario_lattice(c) : lattice(parse_lattice_scenario(name));
  const LatticeReport r = verify_lattice(L);
  json rep = {{"all_subgroups", r.all_subgroups},
              {"reciprocity_holds", r.reciprocity_holds},
              {"all_index_2", r.all_index_2},
              {"injective", r.injective},
              {"demushkin_consistent", r.demushkin_consistent}};
  if (as_json(c)) {
    json j = lattice_json(L);
    j["report"] = rep;
    print(j);
  } else {
    std::cout << "lattice " << to_string(L.scenario()) << "\n";
    for (std::uint8_t a = 1; a < 8; ++a) {
      const SquareClass cl(L.basis(), a);
      std::cout << "  N(" << cl.label() << ") = " << L.norm_group(cl).str() << "\n";
    }
    for (auto &[k, v] : rep.items())
      std::cout << k << ": " << (v.get<bool>() ? "true" : "false") << "\n";
  }
  return 0;
}

int cmd_sum_rule(const Config &c, const std::string &a, const std::string &b) {
  const NormLattice L = scenario_lattice(c);
  SquareClass ca, cb;
  try {
    ca = parse_class(a, L.group());
    cb = parse_class(b, L.group());
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  const SumRuleResult r = sum_rule(L, ca, cb);
  if (as_json(c))
    print({{"a", ca.label()}, {"b", cb.label()}, {"classes", r.classes.labels()},
           {"may_vanish", r.may_vanish}});
  else
    std::cout << r.classes.str() << (r.may_vanish ? " (the sum may vanish)" : "") << "\n";
  return 0;
}

ReplayOptions replay_options(const Config &c) {
  ReplayOptions o;
  o.depth = c.depth;
  o.case_a_lattice = case_a_lattice(c);
  o.keep_traces = c.traces;
  o.oracle = c.oracle;
  o.oracle_samples = c.oracle_samples;
  o.seed = c.seed;
  o.precision = c.precision;
  return o;
}

void print_report_text(const CaseReport &r) {
  std::cout << r.theorem << " [" << r.label << "] " << r.status;
  if (r.trace_failures)
    std::cout << ", " << r.trace_failures << " trace failure(s)";
  std::cout << "\n";
  for (const auto &t : r.targets) {
    std::cout << "    " << t.expr << " in " << t.derived.str();
    if (t.goal)
      std::cout << "  (goal " << t.goal->str() << ")";
    if (t.stored)
      std::cout << "  (stored " << t.stored->str() << ")";
    std::cout << "\n";
  }
  for (const auto &p : r.pinned)
    std::cout << "    pinned " << p.expr << " = " << p.derived.str() << " expected "
              << p.expected.str() << (p.ok ? "" : "  MISMATCH") << "\n";
  for (const auto &m : r.trace_messages)
    std::cout << "    trace: " << m << "\n";
  if (r.oracle) {
    std::cout << "    oracle: " << r.oracle->samples << " samples, "
              << r.oracle->violations.size() << " violations\n";
    for (const auto &v : r.oracle->violations)
      std::cout << "      " << v << "\n";
  }
  for (const auto &n : r.notes)
    std::cout << "    " << n << "\n";
}

int cmd_replay(const Config &c, const std::string &theorem) {
  const ReplayOptions o = replay_options(c);
  if (theorem == "all") {
    const ReplaySummary s = replay_all(o);
    if (as_json(c)) {
      print(to_json(s));
    } else {
      for (const auto &r : s.reports)
        if (!r.ok())
          print_report_text(r);
      for (const auto &t : s.theorems)
        std::cout << t.theorem << ": " << t.proved << " proved, " << t.stuck << " stuck, "
                  << t.impossible << " impossible, " << t.failed << " failed, "
                  << t.trace_failures << " trace failures, " << t.oracle_violations
                  << " oracle violations\n";
      std::cout << "total " << s.seconds << " s, " << (s.ok() ? "ok" : "FAILED") << "\n";
    }
    return s.ok() ? 0 : 1;
  }
  std::vector<CaseReport> reports;
  try {
    reports = replay(theorem, o);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::UnknownTheorem)
      throw UsageError(e.what());
    throw;
  }
  bool ok = true;
  json arr = json::array();
  for (const auto &r : reports) {
    ok &= r.ok();
    if (as_json(c))
      arr.push_back(to_json(r));
    else
      print_report_text(r);
  }
  if (as_json(c))
    print(arr);
  return ok ? 0 : 1;
}

int cmd_table(const Config &c, int id) {
  if (id < 1 || id > 3)
    throw UsageError("table must be 1, 2 or 3");
  const TableResult t = generate_table(id, replay_options(c));
  if (as_json(c))
    print(to_json(t));
  else
    std::cout << render_markdown(t);
  return t.ok ? 0 : 1;
}

int cmd_probe(const Config &c, const std::vector<std::string> &values) {
  if (!values.empty()) {
    json arr = json::array();
    for (const auto &v : values) {
      const Dyadic d = parse_dyadic(v, c.precision);
      if (d.is_zero())
        throw UsageError("probe values must be nonzero");
      const Category a = classify_in_construction(d), b = classify_closed_form(d);
      if (as_json(c))
        arr.push_back({{"value", v}, {"valuation", d.valuation()},
                       {"category", std::string(to_string(a))}, {"closed_form_agrees", a == b}});
      else
        std::cout << v << ": " << to_string(a) << (a == b ? "" : " (closed form disagrees)") << "\n";
    }
    if (as_json(c))
      print(arr);
    return 0;
  }
  const ConstructionReport r = verify_construction(c.samples, c.seed, c.precision);
  if (as_json(c)) {
    json counts = json::object();
    for (const auto &[k, n] : r.counts)
      counts[std::string(to_string(k))] = n;
    print({{"samples", r.samples},
           {"skipped", r.skipped},
           {"counts", counts},
           {"gamma_mod_2_order", r.gamma_mod_2_order},
           {"violations", r.violations},
           {"ok", r.ok()}});
  } else {
    std::cout << r.samples << " samples (" << r.skipped << " skipped)\n";
    for (const auto &[k, n] : r.counts)
      std::cout << "  " << to_string(k) << ": " << n << "\n";
    std::cout << "Gamma/2Gamma order: " << r.gamma_mod_2_order << "\n";
    for (const auto &v : r.violations)
      std::cout << "violation: " << v << "\n";
    std::cout << (r.ok() ? "ok" : "FAILED") << "\n";
  }
  return r.ok() ? 0 : 1;
}

int cmd_demushkin(const Config &c, int p, int n, const std::string &s) {
  DemushkinPresentation pres{p, n, 1};
  if (s == "inf")
    pres.s = std::nullopt;
  else {
    try {
      pres.s = std::stoi(s);
    } catch (const std::exception &) {
      throw UsageError("--s expects a positive integer or 'inf'");
    }
  }
  Abelianization ab;
  try {
    ab = abelianization(pres);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::InvalidArgument)
      throw UsageError(e.what());
    throw;
  }
  const json j = to_json(pres, ab);
  if (as_json(c))
    print(j);
  else
    std::cout << j["abelianization"].get<std::string>() << " (" << pres.rank()
              << " generators)\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Square-class and norm-group calculus for rigid-element constructions"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--scenario", cfg.scenario, "case-a, case-b-3is1 or case-b-3is2")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--precision", cfg.precision, "dyadic precision in bits")
      ->check(CLI::Range(Dyadic::kMinPrecision, Dyadic::kMaxPrecision))
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample count for probe")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--depth", cfg.depth, "case-split depth")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  app.add_option("--mutate-lattice", cfg.mutate, "toggle b in N(a) of the Case A lattice (a:b)");

  std::string classify_value;
  auto *classify = app.add_subcommand("classify", "square class of a number");
  classify->add_option("value", classify_value)->required();

  std::vector<std::string> hilbert_args;
  auto *hilbert = app.add_subcommand("hilbert", "Hilbert symbol (a,b), or the full table");
  hilbert->add_option("values", hilbert_args);

  std::string lattice_name;
  auto *lat = app.add_subcommand("lattice", "print a norm lattice and its checks");
  lat->add_option("name", lattice_name, "case-a, case-b-k or case-b-K");

  std::string sa, sb;
  auto *sum = app.add_subcommand("sum-rule", "classes of p+q for p~a, q~b");
  sum->add_option("a", sa)->required();
  sum->add_option("b", sb)->required();

  std::string theorem;
  auto *rep = app.add_subcommand("replay", "replay a theorem (or all)");
  rep->add_option("theorem", theorem)->required();
  rep->add_flag("--oracle", cfg.oracle, "cross-check Case A reports by dyadic sampling");
  rep->add_option("--oracle-samples", cfg.oracle_samples)->capture_default_str();
  rep->add_flag("--traces", cfg.traces, "embed proof traces in JSON output");

  int table_id = 0;
  auto *tab = app.add_subcommand("table", "derive an appendix table");
  tab->add_option("id", table_id)->required();

  std::vector<std::string> probe_values;
  auto *probe = app.add_subcommand("probe", "sample the valuation-ring construction");
  probe->add_option("values", probe_values, "classify these values instead of sampling");

  int dp = 2, dn = 1;
  std::string ds = "1";
  auto *dem = app.add_subcommand("demushkin", "abelianization invariants");
  dem->add_option("--p", dp)->capture_default_str();
  dem->add_option("--n", dn)->capture_default_str();
  dem->add_option("--s", ds, "positive integer or inf")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*classify)
      return cmd_classify(cfg, classify_value);
    if (*hilbert)
      return cmd_hilbert(cfg, hilbert_args);
    if (*lat)
      return cmd_lattice(cfg, lattice_name);
    if (*sum)
      return cmd_sum_rule(cfg, sa, sb);
    if (*rep)
      return cmd_replay(cfg, theorem);
    if (*tab)
      return cmd_table(cfg, table_id);
    if (*probe)
      return cmd_probe(cfg, probe_values);
    if (*dem)
      return cmd_demushkin(cfg, dp, dn, ds);
  } catch (const UsageError &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
