#pragma once

// Named reproductions of the case analyses, with the stored reference tables.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "normcomb/derivation.hpp"
#include "normcomb/normlattice.hpp"

namespace normcomb {

struct ReplayOptions {
  int depth = 3;
  /// Lattice for the Case A suites (the mutation harness swaps it).
  NormLattice case_a_lattice = lattice(LatticeScenario::CaseA);
  bool check_traces = true;
  /// Embed trace JSON in the reports.
  bool keep_traces = false;
  /// Cross-validate Case A reports by dyadic sampling.
  bool oracle = false;
  std::size_t oracle_samples = 1000;
  std::uint64_t seed = 0;
  int precision = 64;
};

struct TargetResult {
  std::string expr;
  ClassSet derived;
  std::optional<ClassSet> goal;
  /// Stored stored cell, for table rows.
  std::optional<ClassSet> stored;
};

struct PinnedCheck {
  std::string expr;
  ClassSet expected;
  ClassSet derived;
  bool ok = false;
};

struct OracleResult {
  std::size_t samples = 0;
  std::size_t zero_values = 0;
  bool unsatisfiable_at_budget = false;
  std::vector<std::string> violations;
};

struct CaseReport {
  std::string theorem;
  std::string label;
  std::string scenario;
  std::vector<std::pair<std::string, ClassSet>> hypotheses;
  std::vector<TargetResult> targets;
  /// proved | stuck | hypothesis-impossible | failed
  std::string status = "stuck";
  std::vector<PinnedCheck> pinned;
  std::vector<std::string> notes;
  std::size_t traces = 0;
  std::size_t trace_failures = 0;
  std::vector<std::string> trace_messages;
  std::vector<nlohmann::json> trace_json;
  std::optional<OracleResult> oracle;

  /// A contradictory hypothesis case discharges its goal vacuously, which is
  /// only acceptable in Case B (every Case A row is realized in Q2).
  bool ok() const;
};

nlohmann::json to_json(const CaseReport &r);

const std::vector<std::string> &registry();

/// Throws UnknownTheorem.
std::vector<CaseReport> replay(const std::string &theorem, const ReplayOptions &opts = {});

struct TheoremSummary {
  std::string theorem;
  std::size_t proved = 0, stuck = 0, impossible = 0, failed = 0, trace_failures = 0;
  std::size_t oracle_violations = 0;
};

struct ReplaySummary {
  std::vector<TheoremSummary> theorems;
  std::vector<CaseReport> reports;
  double seconds = 0;
  bool ok() const;
};

/// Run every theorem in `filter` (the whole registry when empty).
ReplaySummary replay_all(const ReplayOptions &opts = {},
                         const std::vector<std::string> &filter = {});
nlohmann::json to_json(const ReplaySummary &s);

struct TableRow {
  std::string x, one_plus_x;
  std::vector<ClassSet> stored;
  /// Derived cells per run (Table 1: "case-a"; Table 3: one per branch).
  std::map<std::string, std::vector<ClassSet>> derived;
  bool contained = false;
};

struct TableResult {
  int id = 0;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
  /// Table 3 only: both branches derived the same cells.
  bool identical_across_branches = true;
  /// Table 2: free-form experiment lines.
  std::vector<std::string> notes;
  bool ok = false;
};

/// Tables 1 and 3 are derived and compared with the stored cells; Table 2 is
/// stored input checked against the constant table.
TableResult generate_table(int id, const ReplayOptions &opts = {});
nlohmann::json to_json(const TableResult &t);
std::string render_markdown(const TableResult &t);

/// Hypothesis combinations of the two-variable Case A claim, checked for
/// coverage by the listed cases, x/y symmetry and unit scaling.
struct CoverageResult {
  std::size_t combinations = 0;
  std::size_t immediate = 0, listed = 0, swapped = 0, scaled = 0;
  std::vector<std::string> uncovered;
  bool ok() const { return uncovered.empty(); }
};
CoverageResult prop46_coverage(const ReplayOptions &opts = {});

} // namespace normcomb
