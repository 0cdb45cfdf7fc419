#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mtbounds/panel.hpp"
#include "mtbounds/simlab.hpp"

namespace mtbounds {

// Command-level orchestration shared by the CLI binary and the tests.

struct RunConfig {
  std::vector<int> target_waves;  // labels; empty = every wave
  int past = 0;
  int future = 0;
  std::vector<std::string> covariates;
  std::set<std::string> mar_reasons;
  double alpha = 0.05;
  int boot = 1000;
  std::uint64_t seed = 42;
  std::vector<std::vector<std::string>> ladder;  // sensitivity rungs, cumulative
  double check_eps = 1e-9;
  int check_boot = 0;       // >0 adds an advisory bootstrap support column
  bool clamp01 = false;     // clamp interval endpoints into [0,1]
  bool strict_checks = false;
  bool drop_nonmonotone = false;  // downgrade monotonicity violations, drop units
  std::string exclude_units;      // path to unit-id list dropped at ingestion
  int threads = 0;
  double oracle_grid = 1e-3;
  // simulate command
  std::size_t sim_n = 2000;
  int sim_reps = 0;
  std::string emit_panel;  // when set, write a generated panel CSV here
};

/// JSON config file; unknown keys are rejected. Flag overrides happen in the
/// CLI layer (flags win).
RunConfig load_config(const std::string& path);

/// Scenario file in the JSON schema documented in the README.
Scenario load_scenario(const std::string& path);

// ---------------------------------------------------------------------------
// Reports: a fixed-order CSV plus a JSON mirror of the same fields.

struct ReportCell {
  enum class Kind { Empty, Text, Real, Int, Bool };
  Kind kind = Kind::Empty;
  std::string text;
  double real = 0.0;
  long long integer = 0;
  bool flag = false;

  static ReportCell empty() { return {}; }
  static ReportCell str(std::string s) {
    ReportCell c;
    c.kind = Kind::Text;
    c.text = std::move(s);
    return c;
  }
  static ReportCell num(double v) {
    ReportCell c;
    c.kind = Kind::Real;
    c.real = v;
    return c;
  }
  static ReportCell count(long long v) {
    ReportCell c;
    c.kind = Kind::Int;
    c.integer = v;
    return c;
  }
  static ReportCell boolean(bool v) {
    ReportCell c;
    c.kind = Kind::Bool;
    c.flag = v;
    return c;
  }
  std::string to_string() const;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> meta;  // seed, boot, version, ...
  std::vector<std::string> columns;
  std::vector<std::vector<ReportCell>> rows;

  const ReportCell& cell(std::size_t row, const std::string& column) const;
};

void write_report_csv(const Report& report, std::ostream& out);
void write_report_json(const Report& report, std::ostream& out);
/// Writes <prefix>.csv and <prefix>.json; returns the two paths.
std::pair<std::string, std::string> write_report_files(const Report& report,
                                                       const std::string& prefix);

// ---------------------------------------------------------------------------
// Commands. All take a validated panel (see load_panel) or a scenario.

struct LoadedPanel {
  Panel panel;
  ValidationReport validation;
  std::vector<std::string> warnings;
};

/// Ingests, applies the exclude list, validates. Throws ValidationError when
/// violations block; with cfg.drop_nonmonotone, monotonicity violations
/// become warnings and the offending units are dropped (death-absorption
/// violations always block).
LoadedPanel load_panel(const std::string& csv_path, const RunConfig& cfg);

Report run_validate(const LoadedPanel& lp, const RunConfig& cfg);
Report run_bounds(const Panel& panel, const RunConfig& cfg);
Report run_ci(const Panel& panel, const RunConfig& cfg);
Report run_check(const Panel& panel, const RunConfig& cfg);
Report run_sensitivity(const Panel& panel, const RunConfig& cfg);
Report run_simulate(const Scenario& sc, const RunConfig& cfg);
Report run_oracle(const Scenario& sc, const RunConfig& cfg);

}  // namespace mtbounds
