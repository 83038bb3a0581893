// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "normcomb/demushkin.hpp"
#include "normcomb/dyadic.hpp"
#include "normcomb/normlattice.hpp"
#include "normcomb/replay.hpp"

using namespace normcomb;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict lattice_integrity() {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeReport a = verify_lattice(lattice(LatticeScenario::CaseA));
  const LatticeReport K = verify_lattice(lattice(LatticeScenario::CaseBK));
  const LatticeReport k = verify_lattice(lattice(LatticeScenario::CaseBk));
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "case-a consistent=" << a.demushkin_consistent
     << ", case-b-K consistent=" << K.demushkin_consistent
     << ", case-b-k all_index_2=" << k.all_index_2 << ", " << s << " s";
  return {a.demushkin_consistent && K.demushkin_consistent && !k.all_index_2 && s < 1.0,
          os.str()};
}

ReplayOptions options(const NormLattice &L) {
  ReplayOptions o;
  o.case_a_lattice = L;
  return o;
}

Verdict replay_completeness(const NormLattice &L) {
  ReplaySummary s;
  try {
    s = replay_all(options(L));
  } catch (const std::exception &e) {
    return {false, std::string("replay threw: ") + e.what()};
  }
  std::size_t stuck = 0, traces = 0, bad = 0;
  std::string first;
  for (const auto &r : s.reports) {
    stuck += r.status == "stuck";
    traces += r.trace_failures;
    if (!r.ok()) {
      ++bad;
      if (first.empty())
        first = r.theorem + " [" + r.label + "] " + r.status;
    }
  }
  std::ostringstream os;
  os << s.reports.size() << " cases, " << stuck << " stuck, " << traces
     << " trace failures, " << bad << " not ok, " << s.seconds << " s";
  if (!first.empty())
    os << "; first: " << first;
  return {s.ok() && s.seconds < 60.0, os.str()};
}

Verdict table_containment() {
  std::ostringstream os;
  bool ok = true;
  for (int id : {1, 3}) {
    const TableResult t = generate_table(id);
    std::size_t cells = 0, outside = 0;
    for (const auto &row : t.rows)
      for (const auto &[run, derived] : row.derived)
        for (std::size_t k = 0; k < derived.size(); ++k) {
          ++cells;
          outside += derived[k].is_empty() || !derived[k].subset_of(row.stored[k]);
        }
    os << "table " << id << ": " << outside << "/" << cells << " cells outside or empty";
    if (id == 3)
      os << ", identical across branches=" << t.identical_across_branches;
    os << "; ";
    ok &= t.ok;
  }
  return {ok, os.str()};
}

Verdict pinned_conclusions() {
  struct Want {
    std::string theorem, label, expr;
  };
  const std::vector<Want> wants = {
      {"lemma-4.4", "x~2, 1+x~1", "1 + 2*x"},
      {"prop-4.6", "x~2, 1+x~-5, y~2, 1+y~-5", "1 - x*y"},
      {"appendix-B", "x~-1", "3 + x"},
      {"case-b-residue-2", "3~2: x~c, 1+x~-2, y~1", "2 - x"},
      {"case-b-residue-2", "3~1: x~c, 1+x~-2, y~1", "2 - x"},
  };
  std::ostringstream os;
  bool ok = true;
  for (const auto &w : wants) {
    bool found = false;
    for (const auto &r : replay(w.theorem))
      if (r.label == w.label)
        for (const auto &p : r.pinned)
          if (p.expr == w.expr) {
            found = true;
            ok &= p.ok;
            os << w.theorem << " " << p.expr << " = " << p.derived.str() << "; ";
          }
    if (!found) {
      ok = false;
      os << w.theorem << " [" << w.label << "] missing; ";
    }
  }
  return {ok, os.str()};
}

Verdict oracle_agreement(const NormLattice &L) {
  const auto t0 = std::chrono::steady_clock::now();
  ReplayOptions o = options(L);
  o.oracle = true;
  o.oracle_samples = 1000;
  o.check_traces = false;
  std::size_t cases = 0, thin = 0, violations = 0;
  std::string first;
  try {
    const ReplaySummary s = replay_all(o);
    for (const auto &r : s.reports) {
      if (r.scenario != "case-a" || r.theorem == "table-2" || r.label.rfind("coverage", 0) == 0)
        continue;
      ++cases;
      if (!r.oracle || r.oracle->samples < 1000)
        ++thin;
      if (r.oracle && !r.oracle->violations.empty()) {
        violations += r.oracle->violations.size();
        if (first.empty())
          first = r.oracle->violations.front();
      }
    }
  } catch (const std::exception &e) {
    return {false, std::string("oracle replay threw: ") + e.what()};
  }

  // Sum rule soundness on random pairs.
  SplitMix64 rng(0);
  std::size_t pairs = 0, unsound = 0;
  while (pairs < 10000) {
    const Dyadic p = random_dyadic(rng, -6, 6, 64), q = random_dyadic(rng, -6, 6, 64);
    Dyadic s;
    try {
      s = p + q;
    } catch (const Error &) {
      continue;
    }
    if (s.is_zero())
      continue;
    ++pairs;
    const SumRuleResult r = sum_rule(L, square_class_of(p), square_class_of(q));
    if (!r.classes.contains(square_class_of(s))) {
      ++unsound;
      if (first.empty())
        first = "sum rule: " + p.str() + " + " + q.str();
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << cases << " Case A cases, " << thin << " under 1000 samples, " << violations
     << " violations; sum rule " << unsound << "/" << pairs << " unsound; " << secs << " s";
  if (!first.empty())
    os << "; first: " << first;
  return {cases > 0 && thin == 0 && violations == 0 && unsound == 0 && secs < 30.0, os.str()};
}

Verdict hilbert_cross_validation(const NormLattice &L) {
  const auto t0 = std::chrono::steady_clock::now();
  const HilbertComparison hc = compare_hilbert(L);
  const auto &m = hc.lattice;
  bool symmetric = true, bilinear = true;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      symmetric &= m[a][b] == m[b][a];
      for (int c = 0; c < 8; ++c)
        bilinear &= m[a][b ^ c] == m[a][b] * m[a][c];
    }
  const bool minus_one = m[1][1] == -1;
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "equal=" << hc.equal() << ", symmetric=" << symmetric << ", bilinear=" << bilinear
     << ", (-1,-1)=" << m[1][1] << ", " << s << " s";
  return {hc.equal() && symmetric && bilinear && minus_one && s < 10.0, os.str()};
}

Verdict construction_probe() {
  const ConstructionReport r = verify_construction(10000, 0, 64);
  std::ostringstream os;
  os << r.samples << " samples, " << r.violations.size() << " violations, Gamma/2Gamma order "
     << r.gamma_mod_2_order;
  if (!r.violations.empty())
    os << "; first: " << r.violations.front();
  return {r.ok() && r.gamma_mod_2_order == 2, os.str()};
}

Verdict demushkin_invariants() {
  const Abelianization a = abelianization({2, 1, 1});
  const Abelianization b = abelianization({2, 2, 2});
  const int q = square_class_rank(1, 2);
  std::ostringstream os;
  os << "(2,1,1): Z/" << a.torsion << " + rank " << a.free_rank << "; (2,2,2): Z/" << b.torsion
     << " + rank " << b.free_rank << "; square_class_rank(1,2) = " << q;
  return {a.torsion == 2 && a.free_rank == 2 && b.torsion == 4 && b.free_rank == 3 && q == 3,
          os.str()};
}

Verdict mutation_sensitivity() {
  const NormLattice base = lattice(LatticeScenario::CaseA);
  std::size_t total = 0, caught6 = 0, caught5 = 0, caught2 = 0;
  std::string missed;
  for (std::uint8_t a = 1; a < 8; ++a)
    for (std::uint8_t b = 0; b < 8; ++b) {
      ++total;
      const NormLattice L = base.toggled({Basis::CaseA, a}, {Basis::CaseA, b});
      if (!hilbert_cross_validation(L).ok)
        ++caught6;
      else if (!oracle_agreement(L).ok)
        ++caught5;
      else if (!replay_completeness(L).ok)
        ++caught2;
      else
        missed += " N(" + SquareClass(Basis::CaseA, a).label() + ")^" +
                  SquareClass(Basis::CaseA, b).label();
    }
  std::ostringstream os;
  os << total << " toggles: " << caught6 << " by criterion 6, " << caught5 << " by 5, "
     << caught2 << " by 2";
  if (!missed.empty())
    os << "; missed:" << missed;
  return {missed.empty(), os.str()};
}

} // namespace

int main() {
  const NormLattice A = lattice(LatticeScenario::CaseA);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 lattice integrity", lattice_integrity},
      {"2 replay completeness", [&] { return replay_completeness(A); }},
      {"3 table containment", table_containment},
      {"4 pinned conclusions", pinned_conclusions},
      {"5 oracle agreement", [&] { return oracle_agreement(A); }},
      {"6 Hilbert cross-validation", [&] { return hilbert_cross_validation(A); }},
      {"7 construction probe", construction_probe},
      {"8 Demushkin invariants", demushkin_invariants},
      {"9 mutation sensitivity", mutation_sensitivity},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception &e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (v.ok ? "[PASS] " : "[FAIL] ") << name << ": " << v.detail << std::endl;
    failed += !v.ok;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
