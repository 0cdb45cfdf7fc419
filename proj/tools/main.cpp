// Command-line front end for partial-identification bounds, testable-condition
// checks, confidence intervals, sensitivity ladders and the simulation/oracle
// harness. See README.md for the file formats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtbounds/errors.hpp"
#include "mtbounds/panel_csv.hpp"
#include "mtbounds/run.hpp"
#include "mtbounds/version.hpp"

namespace {

// Exit codes: 0 success, 2 ingestion, 3 validation, 4 configuration,
// 5 estimation/inference, 1 anything else.
constexpr int kOk = 0;
constexpr int kOtherError = 1;
constexpr int kIngestError = 2;
constexpr int kValidationError = 3;
constexpr int kConfigError = 4;
constexpr int kEstimationError = 5;

struct CommonFlags {
  std::string config_path;
  std::string data_path;
  std::string scenario_path;
  std::string out_prefix;
  // Optional overrides; config provides defaults, flags win.
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<int> boot;
  std::optional<int> past;
  std::optional<int> future;
  std::optional<std::vector<int>> waves;
  std::optional<std::vector<std::string>> covariates;
  std::optional<std::vector<std::string>> mar_reasons;
  std::optional<std::string> ladder_spec;
  std::optional<std::string> exclude_units;
  std::optional<int> check_boot;
  std::optional<std::size_t> sim_n;
  std::optional<int> sim_reps;
  std::optional<std::string> emit_panel;
  std::optional<double> oracle_grid;
  std::optional<int> threads;
  bool clamp01 = false;
  bool strict_checks = false;
  bool drop_nonmonotone = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool needs_data, bool needs_scenario) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override it");
  if (needs_data) {
    cmd->add_option("--data", f.data_path, "panel CSV file")->required();
  }
  if (needs_scenario) {
    cmd->add_option("--scenario", f.scenario_path, "scenario JSON file")->required();
  }
  cmd->add_option("--out", f.out_prefix, "report path prefix (writes .csv and .json)");
  cmd->add_option("--alpha", f.alpha, "confidence level alpha");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--boot", f.boot, "bootstrap replicates");
  cmd->add_option("--past", f.past, "past horizon (waves before the target)");
  cmd->add_option("--future", f.future, "future horizon (waves after the target)");
  cmd->add_option("--wave", f.waves, "target wave label(s)");
  cmd->add_option("--covariates", f.covariates, "stratification covariates");
  cmd->add_option("--mar", f.mar_reasons, "missing reasons classified as MAR-type");
  cmd->add_option("--ladder", f.ladder_spec,
                  "sensitivity ladder: groups split by ';', reasons by ','");
  cmd->add_option("--exclude-units", f.exclude_units, "file with unit ids to drop");
  cmd->add_option("--check-boot", f.check_boot, "advisory bootstrap replicates for checks");
  cmd->add_option("--n", f.sim_n, "simulated sample size");
  cmd->add_option("--reps", f.sim_reps, "coverage replicates");
  cmd->add_option("--emit-panel", f.emit_panel, "write a generated panel CSV here");
  cmd->add_option("--grid", f.oracle_grid, "oracle grid step");
  cmd->add_option("--threads", f.threads, "worker threads (0 = auto)");
  cmd->add_flag("--clamp01", f.clamp01, "clamp interval endpoints into [0,1]");
  cmd->add_flag("--strict-checks", f.strict_checks, "abort when a testable condition fails");
  cmd->add_flag("--drop-nonmonotone", f.drop_nonmonotone,
                "downgrade outcome-monotonicity violations and drop those units");
}

std::vector<std::vector<std::string>> parse_ladder(const std::string& spec) {
  std::vector<std::vector<std::string>> ladder;
  std::string group;
  std::stringstream groups(spec);
  while (std::getline(groups, group, ';')) {
    std::vector<std::string> reasons;
    std::string reason;
    std::stringstream items(group);
    while (std::getline(items, reason, ',')) {
      if (!reason.empty()) reasons.push_back(reason);
    }
    if (!reasons.empty()) ladder.push_back(std::move(reasons));
  }
  return ladder;
}

mtbounds::RunConfig build_config(const CommonFlags& f) {
  mtbounds::RunConfig cfg;
  if (!f.config_path.empty()) cfg = mtbounds::load_config(f.config_path);
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.seed) cfg.seed = *f.seed;
  if (f.boot) cfg.boot = *f.boot;
  if (f.past) cfg.past = *f.past;
  if (f.future) cfg.future = *f.future;
  if (f.waves) cfg.target_waves = *f.waves;
  if (f.covariates) cfg.covariates = *f.covariates;
  if (f.mar_reasons) cfg.mar_reasons = {f.mar_reasons->begin(), f.mar_reasons->end()};
  if (f.ladder_spec) cfg.ladder = parse_ladder(*f.ladder_spec);
  if (f.exclude_units) cfg.exclude_units = *f.exclude_units;
  if (f.check_boot) cfg.check_boot = *f.check_boot;
  if (f.sim_n) cfg.sim_n = *f.sim_n;
  if (f.sim_reps) cfg.sim_reps = *f.sim_reps;
  if (f.emit_panel) cfg.emit_panel = *f.emit_panel;
  if (f.oracle_grid) cfg.oracle_grid = *f.oracle_grid;
  if (f.threads) cfg.threads = *f.threads;
  if (f.clamp01) cfg.clamp01 = true;
  if (f.strict_checks) cfg.strict_checks = true;
  if (f.drop_nonmonotone) cfg.drop_nonmonotone = true;
  if (cfg.past < 0 || cfg.future < 0) {
    throw mtbounds::ConfigError("horizons must be nonnegative");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw mtbounds::ConfigError("alpha must lie in (0,1)");
  }
  return cfg;
}

void emit(const mtbounds::Report& report, const std::string& prefix_flag) {
  const std::string prefix = prefix_flag.empty() ? report.command + "_report" : prefix_flag;
  const auto [csv_path, json_path] = mtbounds::write_report_files(report, prefix);
  std::cout << "wrote " << csv_path << " and " << json_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-identification bounds for a monotone binary outcome "
               "under type-specific survey nonresponse"};
  app.set_version_flag("--version", std::string(mtbounds::kVersion));
  app.require_subcommand(1);

  CommonFlags validate_f, bounds_f, ci_f, check_f, sens_f, sim_f, oracle_f;
  std::string convert_in, convert_out;

  auto* cmd_validate = app.add_subcommand("validate", "ingest and validate a panel CSV");
  add_common_flags(cmd_validate, validate_f, true, false);
  auto* cmd_bounds = app.add_subcommand("bounds", "estimate bounds per stratum and wave");
  add_common_flags(cmd_bounds, bounds_f, true, false);
  auto* cmd_ci = app.add_subcommand("ci", "bounds plus confidence intervals");
  add_common_flags(cmd_ci, ci_f, true, false);
  auto* cmd_check = app.add_subcommand("check", "evaluate the testable conditions");
  add_common_flags(cmd_check, check_f, true, false);
  auto* cmd_sens = app.add_subcommand("sensitivity",
                                      "bounds/CI ladder over MAR reclassifications");
  add_common_flags(cmd_sens, sens_f, true, false);
  auto* cmd_sim = app.add_subcommand("simulate", "generate panels / run a coverage study");
  add_common_flags(cmd_sim, sim_f, false, true);
  auto* cmd_oracle = app.add_subcommand("oracle",
                                        "compare analytic bounds with the feasibility oracle");
  add_common_flags(cmd_oracle, oracle_f, false, true);
  auto* cmd_convert = app.add_subcommand("convert", "convert a long-format CSV to the wide schema");
  cmd_convert->add_option("--long", convert_in, "long-format input CSV")->required();
  cmd_convert->add_option("--out", convert_out, "wide-format output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (cmd_validate->parsed()) {
      const auto cfg = build_config(validate_f);
      const auto lp = mtbounds::load_panel(validate_f.data_path, cfg);
      const auto report = mtbounds::run_validate(lp, cfg);
      for (const auto& w : lp.warnings) std::cerr << "warning: " << w << "\n";
      emit(report, validate_f.out_prefix);
    } else if (cmd_bounds->parsed()) {
      const auto cfg = build_config(bounds_f);
      const auto lp = mtbounds::load_panel(bounds_f.data_path, cfg);
      emit(mtbounds::run_bounds(lp.panel, cfg), bounds_f.out_prefix);
    } else if (cmd_ci->parsed()) {
      const auto cfg = build_config(ci_f);
      const auto lp = mtbounds::load_panel(ci_f.data_path, cfg);
      emit(mtbounds::run_ci(lp.panel, cfg), ci_f.out_prefix);
    } else if (cmd_check->parsed()) {
      const auto cfg = build_config(check_f);
      const auto lp = mtbounds::load_panel(check_f.data_path, cfg);
      emit(mtbounds::run_check(lp.panel, cfg), check_f.out_prefix);
    } else if (cmd_sens->parsed()) {
      const auto cfg = build_config(sens_f);
      const auto lp = mtbounds::load_panel(sens_f.data_path, cfg);
      emit(mtbounds::run_sensitivity(lp.panel, cfg), sens_f.out_prefix);
    } else if (cmd_sim->parsed()) {
      const auto cfg = build_config(sim_f);
      const auto sc = mtbounds::load_scenario(sim_f.scenario_path);
      emit(mtbounds::run_simulate(sc, cfg), sim_f.out_prefix);
    } else if (cmd_oracle->parsed()) {
      const auto cfg = build_config(oracle_f);
      const auto sc = mtbounds::load_scenario(oracle_f.scenario_path);
      emit(mtbounds::run_oracle(sc, cfg), oracle_f.out_prefix);
    } else if (cmd_convert->parsed()) {
      std::ifstream in(convert_in);
      if (!in) throw mtbounds::IngestError("cannot open " + convert_in);
      std::ofstream out(convert_out);
      if (!out) throw mtbounds::IngestError("cannot open " + convert_out + " for writing");
      mtbounds::convert_long_to_wide(in, out);
      std::cout << "wrote " << convert_out << "\n";
    }
  } catch (const mtbounds::IngestError& e) {
    std::cerr << "ingestion error: " << e.what() << "\n";
    return kIngestError;
  } catch (const mtbounds::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const mtbounds::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const mtbounds::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return kEstimationError;
  } catch (const mtbounds::InferenceError& e) {
    std::cerr << "inference error: " << e.what() << "\n";
    return kEstimationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherError;
  }
  return kOk;
}
