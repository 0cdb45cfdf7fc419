#include "mtbounds/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "mtbounds/diagnostics.hpp"
#include "mtbounds/errors.hpp"
#include "mtbounds/inference.hpp"
#include "mtbounds/panel_csv.hpp"
#include "mtbounds/stats.hpp"
#include "mtbounds/version.hpp"

namespace mtbounds {

using nlohmann::json;

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

std::array<double, 3> json_row(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where + " must be a 3-element array [observed, mar, mnar]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const std::set<std::string> kConfigKeys = {
    "target_waves", "past",        "future",       "covariates",  "mar_reasons",
    "alpha",        "boot",        "seed",         "ladder",      "check_eps",
    "check_boot",   "clamp01",     "strict_checks", "drop_nonmonotone",
    "exclude_units", "threads",    "oracle_grid",  "sim_n",       "sim_reps",
    "emit_panel"};

}  // namespace

RunConfig load_config(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.contains(key)) throw ConfigError(path + ": unknown config key " + key);
  }
  RunConfig cfg;
  if (j.contains("target_waves")) cfg.target_waves = j["target_waves"].get<std::vector<int>>();
  if (j.contains("past")) cfg.past = j["past"].get<int>();
  if (j.contains("future")) cfg.future = j["future"].get<int>();
  if (j.contains("covariates"))
    cfg.covariates = j["covariates"].get<std::vector<std::string>>();
  if (j.contains("mar_reasons")) {
    for (const auto& r : j["mar_reasons"]) cfg.mar_reasons.insert(r.get<std::string>());
  }
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("boot")) cfg.boot = j["boot"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("ladder")) {
    for (const auto& entry : j["ladder"]) {
      if (entry.is_string()) {
        cfg.ladder.push_back({entry.get<std::string>()});
      } else {
        cfg.ladder.push_back(entry.get<std::vector<std::string>>());
      }
    }
  }
  if (j.contains("check_eps")) cfg.check_eps = j["check_eps"].get<double>();
  if (j.contains("check_boot")) cfg.check_boot = j["check_boot"].get<int>();
  if (j.contains("clamp01")) cfg.clamp01 = j["clamp01"].get<bool>();
  if (j.contains("strict_checks")) cfg.strict_checks = j["strict_checks"].get<bool>();
  if (j.contains("drop_nonmonotone"))
    cfg.drop_nonmonotone = j["drop_nonmonotone"].get<bool>();
  if (j.contains("exclude_units")) cfg.exclude_units = j["exclude_units"].get<std::string>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("oracle_grid")) cfg.oracle_grid = j["oracle_grid"].get<double>();
  if (j.contains("sim_n")) cfg.sim_n = j["sim_n"].get<std::size_t>();
  if (j.contains("sim_reps")) cfg.sim_reps = j["sim_reps"].get<int>();
  if (j.contains("emit_panel")) cfg.emit_panel = j["emit_panel"].get<std::string>();

  if (cfg.past < 0 || cfg.future < 0) throw ConfigError("horizons must be nonnegative");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  return cfg;
}

Scenario load_scenario(const std::string& path) {
  const json j = read_json_file(path);
  Scenario sc;
  try {
    sc.waves = j.at("waves").get<std::vector<int>>();
    sc.initial_prevalence = j.at("initial_prevalence").get<double>();
    sc.infection_hazard = j.at("infection_hazard").get<std::vector<double>>();
    if (j.contains("death_hazard_y0")) {
      sc.death_hazard_y0 = j["death_hazard_y0"].get<std::vector<double>>();
      sc.death_hazard_y1 = j.at("death_hazard_y1").get<std::vector<double>>();
    }
    for (const auto& k : j.at("missingness")) {
      const std::string type = k.at("type").get<std::string>();
      if (type == "uniform") {
        sc.missingness.push_back(MissingnessKernel::uniform(json_row(k.at("probs"), "probs")));
      } else if (type == "by_outcome") {
        sc.missingness.push_back(MissingnessKernel::by_outcome(json_row(k.at("y0"), "y0"),
                                                               json_row(k.at("y1"), "y1")));
      } else if (type == "by_previous") {
        sc.missingness.push_back(MissingnessKernel::by_previous(
            json_row(k.at("initial"), "initial"), json_row(k.at("prev_observed"), "prev_observed"),
            json_row(k.at("prev_mar"), "prev_mar"), json_row(k.at("prev_mnar"), "prev_mnar")));
      } else {
        throw ConfigError("unknown missingness kernel type: " + type);
      }
    }
    if (j.contains("mar_holds")) sc.mar_holds = j["mar_holds"].get<bool>();
    if (j.contains("mar_reason_labels"))
      sc.mar_reason_labels = j["mar_reason_labels"].get<std::vector<std::string>>();
    if (j.contains("mnar_reason_labels"))
      sc.mnar_reason_labels = j["mnar_reason_labels"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  sc.check();
  return sc;
}

// ---------------------------------------------------------------------------
// Report plumbing.

std::string ReportCell::to_string() const {
  switch (kind) {
    case Kind::Empty: return "";
    case Kind::Text: return text;
    case Kind::Real: return format_real(real);
    case Kind::Int: return std::to_string(integer);
    case Kind::Bool: return flag ? "true" : "false";
  }
  return "";
}

const ReportCell& Report::cell(std::size_t row, const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw std::invalid_argument("no such report column: " + column);
  return rows.at(row).at(static_cast<std::size_t>(it - columns.begin()));
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_report_csv(const Report& report, std::ostream& out) {
  for (const auto& [key, value] : report.meta) {
    out << "# " << key << '=' << value << '\n';
  }
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_escape(report.columns[c]);
  }
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_escape(row[c].to_string());
    }
    out << '\n';
  }
}

void write_report_json(const Report& report, std::ostream& out) {
  json j;
  j["command"] = report.command;
  json meta = json::object();
  for (const auto& [key, value] : report.meta) meta[key] = value;
  j["meta"] = meta;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& cell = row[c];
      switch (cell.kind) {
        case ReportCell::Kind::Empty: obj[report.columns[c]] = nullptr; break;
        case ReportCell::Kind::Text: obj[report.columns[c]] = cell.text; break;
        case ReportCell::Kind::Real: obj[report.columns[c]] = cell.real; break;
        case ReportCell::Kind::Int: obj[report.columns[c]] = cell.integer; break;
        case ReportCell::Kind::Bool: obj[report.columns[c]] = cell.flag; break;
      }
    }
    rows.push_back(std::move(obj));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

std::pair<std::string, std::string> write_report_files(const Report& report,
                                                       const std::string& prefix) {
  const std::string csv_path = prefix + ".csv";
  const std::string json_path = prefix + ".json";
  std::ofstream csv(csv_path);
  if (!csv) throw ConfigError("cannot open " + csv_path + " for writing");
  write_report_csv(report, csv);
  std::ofstream js(json_path);
  if (!js) throw ConfigError("cannot open " + json_path + " for writing");
  write_report_json(report, js);
  return {csv_path, json_path};
}

// ---------------------------------------------------------------------------
// Command implementations.

namespace {

const std::vector<std::string> kResultColumns = {
    "stratum",        "wave",           "I",       "J",        "lower",    "upper",
    "selected_lower", "selected_upper", "c_value", "ci_lower", "ci_upper", "flags"};

Report make_report(std::string command, const RunConfig& cfg, bool randomized) {
  Report r;
  r.command = std::move(command);
  r.meta.emplace_back("version", kVersion);
  if (randomized) {
    r.meta.emplace_back("seed", std::to_string(cfg.seed));
    r.meta.emplace_back("boot", std::to_string(cfg.boot));
  }
  r.meta.emplace_back("alpha", format_real(cfg.alpha));
  return r;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

std::string selected_label(const std::vector<Candidate>& candidates, double value) {
  for (const auto& c : candidates) {
    if (c.value == value) return c.label;
  }
  return candidates.empty() ? std::string{} : candidates.front().label;
}

std::vector<int> resolve_waves(const Panel& panel, const RunConfig& cfg) {
  if (cfg.target_waves.empty()) return panel.waves;
  std::vector<int> out;
  for (int label : cfg.target_waves) {
    (void)panel.wave_index(label);  // throws on unknown labels
    out.push_back(label);
  }
  return out;
}

Panel with_extended_vocabulary(Panel panel, const std::set<std::string>& extra) {
  // Vocabulary is data plus config: reasons the analyst lists may be absent
  // from this particular sample or stratum.
  panel.reason_vocabulary.insert(extra.begin(), extra.end());
  return panel;
}

struct HorizonPlan {
  int target_index = 0;
  int past = 0;
  int future = 0;
  bool clipped = false;
};

HorizonPlan plan_horizons(const Panel& panel, int wave_label, const RunConfig& cfg) {
  HorizonPlan plan;
  plan.target_index = static_cast<int>(panel.wave_index(wave_label));
  const int max_future = static_cast<int>(panel.wave_count()) - 1 - plan.target_index;
  plan.past = std::min(cfg.past, plan.target_index);
  plan.future = std::min(cfg.future, max_future);
  plan.clipped = plan.past != cfg.past || plan.future != cfg.future;
  return plan;
}

void append_check_flags(std::vector<std::string>& flags, const FrequencyTable& ft,
                        const RunConfig& cfg) {
  for (const auto& check : applicable_checks(ft, cfg.check_eps)) {
    if (!check.satisfied) {
      flags.push_back("check:" + check.id + ":violated");
      if (cfg.strict_checks) {
        throw EstimationError("testable condition violated (" + check.id +
                              ") and --strict-checks is set");
      }
    }
  }
}

struct StratumComputation {
  std::string key;
  double weight = 1.0;
  BoundsResult bounds;
  std::vector<std::string> flags;
  TermEstimates terms;       // filled when bootstrapping
  bool has_terms = false;
};

std::vector<StratumComputation> compute_strata(const Panel& panel, const RunConfig& cfg,
                                               int wave_label, bool with_terms) {
  const Classification cls{cfg.mar_reasons};
  std::vector<StratumComputation> out;
  auto strata = stratify(panel, cfg.covariates);
  for (std::size_t k = 0; k < strata.size(); ++k) {
    auto& stratum = strata[k];
    stratum.panel = with_extended_vocabulary(std::move(stratum.panel), cfg.mar_reasons);
    StratumComputation sc;
    sc.key = stratum.key;
    sc.weight = stratum.weight();
    const HorizonPlan plan = plan_horizons(panel, wave_label, cfg);
    if (plan.clipped) sc.flags.push_back("clipped-horizon");
    const IndicatorPanel ip = classify(stratum.panel, cls);
    const FrequencyTable ft = frequencies(ip, plan.target_index, plan.past, plan.future);
    append_check_flags(sc.flags, ft, cfg);
    sc.bounds = longitudinal_bounds(ft);
    if (!sc.bounds.informative) sc.flags.push_back("uninformative");
    for (const auto& note : sc.bounds.notes) sc.flags.push_back("note:" + note);
    if (with_terms) {
      const std::uint64_t stratum_seed =
          splitmix64(cfg.seed ^ splitmix64((static_cast<std::uint64_t>(wave_label) << 16) ^ k));
      sc.terms = bootstrap_terms(ip, {plan.target_index, plan.past, plan.future}, cfg.boot,
                                 stratum_seed);
      sc.has_terms = true;
      for (const auto& t : sc.terms.lower) {
        if (t.se_unreliable) sc.flags.push_back("se-unreliable:" + t.label);
      }
      for (const auto& t : sc.terms.upper) {
        if (t.se_unreliable) sc.flags.push_back("se-unreliable:" + t.label);
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

void append_result_row(Report& report, const std::string& stratum, int wave,
                       const BoundsResult& bounds, const IntervalResult* ci,
                       std::vector<std::string> flags, const RunConfig& cfg) {
  std::vector<ReportCell> row;
  row.push_back(ReportCell::str(stratum));
  row.push_back(ReportCell::count(wave));
  row.push_back(ReportCell::count(bounds.past_horizon));
  row.push_back(ReportCell::count(bounds.future_horizon));
  if (bounds.informative || bounds.aggregated) {
    row.push_back(ReportCell::num(bounds.lower));
    row.push_back(ReportCell::num(bounds.upper));
  } else {
    row.push_back(ReportCell::num(0.0));
    row.push_back(ReportCell::num(1.0));
  }
  if (ci != nullptr) {
    row.push_back(ReportCell::str(ci->selected_lower));
    row.push_back(ReportCell::str(ci->selected_upper));
  } else {
    row.push_back(ReportCell::str(bounds.aggregated
                                      ? "weighted-sum"
                                      : selected_label(bounds.lower_candidates, bounds.lower)));
    row.push_back(ReportCell::str(bounds.aggregated
                                      ? "weighted-sum"
                                      : selected_label(bounds.upper_candidates, bounds.upper)));
  }
  if (ci != nullptr) {
    double lo = ci->lower_end, hi = ci->upper_end;
    if (cfg.clamp01) {
      const double clo = std::max(0.0, lo), chi = std::min(1.0, hi);
      if (clo != lo || chi != hi) flags.push_back("clamped");
      lo = clo;
      hi = chi;
    }
    row.push_back(ReportCell::num(ci->c_value));
    row.push_back(ReportCell::num(lo));
    row.push_back(ReportCell::num(hi));
  } else {
    row.push_back(ReportCell::empty());
    row.push_back(ReportCell::empty());
    row.push_back(ReportCell::empty());
  }
  row.push_back(ReportCell::str(join_flags(flags)));
  report.rows.push_back(std::move(row));
}

}  // namespace

LoadedPanel load_panel(const std::string& csv_path, const RunConfig& cfg) {
  LoadedPanel lp;
  lp.panel = read_panel_csv_file(csv_path);
  if (!cfg.exclude_units.empty()) {
    const auto ids = read_unit_id_list(cfg.exclude_units);
    lp.panel = drop_units(lp.panel, ids);
    lp.warnings.push_back("excluded " + std::to_string(ids.size()) + " listed unit(s)");
  }
  lp.panel = with_extended_vocabulary(std::move(lp.panel), cfg.mar_reasons);
  lp.validation = validate(lp.panel);
  if (lp.validation.ok()) return lp;

  const auto death_offenders = lp.validation.offending_units(Violation::Kind::DeathNotAbsorbing);
  if (!death_offenders.empty()) {
    throw ValidationError("death-absorption violations in " +
                          std::to_string(death_offenders.size()) + " unit(s)");
  }
  const auto monotone_offenders =
      lp.validation.offending_units(Violation::Kind::OutcomeNotMonotone);
  if (!cfg.drop_nonmonotone) {
    throw ValidationError("outcome-monotonicity violations in " +
                          std::to_string(monotone_offenders.size()) +
                          " unit(s); rerun with --drop-nonmonotone to drop them");
  }
  lp.panel = drop_units(lp.panel, monotone_offenders);
  lp.warnings.push_back("dropped " + std::to_string(monotone_offenders.size()) +
                        " unit(s) with non-monotone observed outcomes");
  return lp;
}

Report run_validate(const LoadedPanel& lp, const RunConfig& cfg) {
  Report report = make_report("validate", cfg, false);
  report.columns = {"wave",    "alive",   "dead",
                    "observed", "missing", "missing_share_total",
                    "missing_share_alive"};
  for (const auto& s : summarize(lp.panel)) {
    report.rows.push_back({ReportCell::count(s.wave), ReportCell::count(s.alive),
                           ReportCell::count(s.dead), ReportCell::count(s.observed),
                           ReportCell::count(s.missing), ReportCell::num(s.missing_share_total),
                           ReportCell::num(s.missing_share_alive)});
  }
  report.meta.emplace_back("units", std::to_string(lp.panel.units.size()));
  report.meta.emplace_back("violations", std::to_string(lp.validation.violations.size()));
  for (const auto& w : lp.warnings) report.meta.emplace_back("warning", w);
  return report;
}

Report run_bounds(const Panel& panel, const RunConfig& cfg) {
  Report report = make_report("bounds", cfg, false);
  report.columns = kResultColumns;
  for (int wave : resolve_waves(panel, cfg)) {
    auto strata = compute_strata(panel, cfg, wave, false);
    for (const auto& s : strata) {
      append_result_row(report, s.key, wave, s.bounds, nullptr, s.flags, cfg);
    }
    if (!cfg.covariates.empty() && strata.size() > 1) {
      std::vector<WeightedBounds> weighted;
      for (const auto& s : strata) weighted.push_back({s.key, s.bounds, s.weight});
      const BoundsResult overall = aggregate_bounds(weighted);
      std::vector<std::string> flags;
      if (!overall.informative) flags.push_back("uninformative-stratum");
      append_result_row(report, "overall", wave, overall, nullptr, flags, cfg);
    }
  }
  return report;
}

Report run_ci(const Panel& panel, const RunConfig& cfg) {
  Report report = make_report("ci", cfg, true);
  report.columns = kResultColumns;
  for (int wave : resolve_waves(panel, cfg)) {
    auto strata = compute_strata(panel, cfg, wave, true);
    std::vector<StratumTerms> pooled;
    for (const auto& s : strata) {
      const IntervalResult ci = ci_construct(s.terms, cfg.alpha);
      append_result_row(report, s.key, wave, s.bounds, &ci, s.flags, cfg);
      pooled.push_back({s.key, s.terms, s.weight});
    }
    if (!cfg.covariates.empty() && strata.size() > 1) {
      const IntervalResult ci = ci_aggregate(pooled, cfg.alpha);
      std::vector<WeightedBounds> weighted;
      for (const auto& s : strata) weighted.push_back({s.key, s.bounds, s.weight});
      const BoundsResult overall = aggregate_bounds(weighted);
      std::vector<std::string> flags;
      if (!overall.informative) flags.push_back("uninformative-stratum");
      append_result_row(report, "overall", wave, overall, &ci, flags, cfg);
    }
  }
  return report;
}

Report run_check(const Panel& panel, const RunConfig& cfg) {
  Report report = make_report("check", cfg, cfg.check_boot > 0);
  report.columns = {"stratum", "wave", "I",        "J",      "condition", "lhs",
                    "rhs",     "slack", "satisfied", "vacuous", "note"};
  if (cfg.check_boot > 0) report.columns.push_back("boot_support");
  const Classification cls{cfg.mar_reasons};
  for (int wave : resolve_waves(panel, cfg)) {
    auto strata = stratify(panel, cfg.covariates);
    for (auto& stratum : strata) {
      stratum.panel = with_extended_vocabulary(std::move(stratum.panel), cfg.mar_reasons);
      const HorizonPlan plan = plan_horizons(panel, wave, cfg);
      const IndicatorPanel ip = classify(stratum.panel, cls);
      const FrequencyTable ft = frequencies(ip, plan.target_index, plan.past, plan.future);
      for (const auto& check : applicable_checks(ft, cfg.check_eps)) {
        std::vector<ReportCell> row;
        row.push_back(ReportCell::str(stratum.key));
        row.push_back(ReportCell::count(wave));
        row.push_back(ReportCell::count(plan.past));
        row.push_back(ReportCell::count(plan.future));
        row.push_back(ReportCell::str(check.id));
        if (check.vacuous) {
          row.push_back(ReportCell::empty());
          row.push_back(ReportCell::empty());
          row.push_back(ReportCell::empty());
        } else {
          row.push_back(ReportCell::num(check.lhs));
          row.push_back(ReportCell::num(check.rhs));
          row.push_back(ReportCell::num(check.slack));
        }
        row.push_back(ReportCell::boolean(check.satisfied));
        row.push_back(ReportCell::boolean(check.vacuous));
        row.push_back(ReportCell::str(check.note));
        if (cfg.check_boot > 0) {
          const double support = condition_bootstrap_support(
              ip, plan.target_index, plan.past, plan.future, check.id, cfg.check_boot,
              splitmix64(cfg.seed ^ static_cast<std::uint64_t>(wave)), cfg.check_eps);
          row.push_back(ReportCell::num(support));
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

Report run_sensitivity(const Panel& panel, const RunConfig& cfg) {
  // Validate the ladder: entries distinct, drawn from the vocabulary.
  std::set<std::string> seen;
  for (const auto& group : cfg.ladder) {
    if (group.empty()) throw ConfigError("sensitivity ladder has an empty entry");
    for (const auto& reason : group) {
      if (!panel.reason_vocabulary.contains(reason)) {
        throw ConfigError("ladder reason not in the reason vocabulary: " + reason);
      }
      if (!seen.insert(reason).second) {
        throw ConfigError("ladder reason listed twice: " + reason);
      }
    }
  }

  Report report = make_report("sensitivity", cfg, cfg.boot > 0);
  report.columns = kResultColumns;
  report.columns.insert(report.columns.end(), {"rung", "rung_label", "mar_set"});

  const bool with_ci = cfg.boot > 0;
  for (int wave : resolve_waves(panel, cfg)) {
    for (std::size_t rung = 0; rung <= cfg.ladder.size(); ++rung) {
      RunConfig rung_cfg = cfg;
      rung_cfg.mar_reasons.clear();
      for (std::size_t g = 0; g < rung; ++g) {
        rung_cfg.mar_reasons.insert(cfg.ladder[g].begin(), cfg.ladder[g].end());
      }
      const std::string rung_label = rung == 0 ? "A" : "JD" + std::to_string(rung);
      std::string mar_set;
      for (const auto& r : rung_cfg.mar_reasons) {
        if (!mar_set.empty()) mar_set += ',';
        mar_set += r;
      }

      auto strata = compute_strata(panel, rung_cfg, wave, with_ci);
      const std::size_t first_row = report.rows.size();
      std::vector<StratumTerms> pooled;
      for (const auto& s : strata) {
        if (with_ci) {
          const IntervalResult ci = ci_construct(s.terms, cfg.alpha);
          append_result_row(report, s.key, wave, s.bounds, &ci, s.flags, cfg);
          pooled.push_back({s.key, s.terms, s.weight});
        } else {
          append_result_row(report, s.key, wave, s.bounds, nullptr, s.flags, cfg);
        }
      }
      if (!cfg.covariates.empty() && strata.size() > 1) {
        std::vector<WeightedBounds> weighted;
        for (const auto& s : strata) weighted.push_back({s.key, s.bounds, s.weight});
        const BoundsResult overall = aggregate_bounds(weighted);
        if (with_ci) {
          const IntervalResult ci = ci_aggregate(pooled, cfg.alpha);
          append_result_row(report, "overall", wave, overall, &ci, {}, cfg);
        } else {
          append_result_row(report, "overall", wave, overall, nullptr, {}, cfg);
        }
      }
      for (std::size_t r = first_row; r < report.rows.size(); ++r) {
        report.rows[r].push_back(ReportCell::count(static_cast<long long>(rung)));
        report.rows[r].push_back(ReportCell::str(rung_label));
        report.rows[r].push_back(ReportCell::str(mar_set));
      }
    }
  }
  return report;
}

Report run_simulate(const Scenario& sc, const RunConfig& cfg) {
  if (cfg.emit_panel.empty() && cfg.sim_reps <= 0) {
    throw ConfigError("simulate needs --emit-panel and/or --reps");
  }
  Report report = make_report("simulate", cfg, true);
  if (!cfg.emit_panel.empty()) {
    const Panel panel = generate(sc, cfg.sim_n, cfg.seed);
    write_panel_csv_file(panel, cfg.emit_panel);
    report.meta.emplace_back("panel_file", cfg.emit_panel);
    report.meta.emplace_back("panel_units", std::to_string(panel.units.size()));
  }
  if (cfg.sim_reps > 0) {
    CoverageSpec spec;
    if (cfg.target_waves.empty()) {
      spec.target_index = 0;
    } else {
      const auto it = std::find(sc.waves.begin(), sc.waves.end(), cfg.target_waves.front());
      if (it == sc.waves.end()) {
        throw ConfigError("wave not in scenario: " + std::to_string(cfg.target_waves.front()));
      }
      spec.target_index = static_cast<int>(it - sc.waves.begin());
    }
    spec.past = std::min(cfg.past, spec.target_index);
    spec.future = std::min(cfg.future, static_cast<int>(sc.wave_count()) - 1 - spec.target_index);
    spec.sample_size = cfg.sim_n;
    spec.replicates = cfg.sim_reps;
    spec.alpha = cfg.alpha;
    spec.bootstrap = cfg.boot;
    spec.seed = cfg.seed;
    spec.threads = cfg.threads;
    const CoverageReport cov = coverage_study(sc, spec);
    report.columns = {"wave",     "I",       "J",        "n",       "replicates", "alpha",
                      "true_pi",  "covered", "failed",   "coverage", "mc_se",     "mean_width"};
    report.rows.push_back(
        {ReportCell::count(sc.waves[static_cast<std::size_t>(spec.target_index)]),
         ReportCell::count(spec.past), ReportCell::count(spec.future),
         ReportCell::count(static_cast<long long>(spec.sample_size)),
         ReportCell::count(cov.replicates), ReportCell::num(cov.alpha),
         ReportCell::num(cov.true_pi), ReportCell::count(cov.covered),
         ReportCell::count(cov.failed), ReportCell::num(cov.coverage()),
         ReportCell::num(cov.mc_se()), ReportCell::num(cov.mean_width)});
  }
  return report;
}

Report run_oracle(const Scenario& sc, const RunConfig& cfg) {
  Report report = make_report("oracle", cfg, false);
  report.columns = {"wave",      "I",          "J",       "lower",    "upper",
                    "oracle_min", "oracle_max", "feasible", "grid_step", "agree"};
  const std::vector<int> waves = cfg.target_waves.empty() ? sc.waves : cfg.target_waves;
  for (int wave : waves) {
    const auto it = std::find(sc.waves.begin(), sc.waves.end(), wave);
    if (it == sc.waves.end()) throw ConfigError("wave not in scenario: " + std::to_string(wave));
    const int t = static_cast<int>(it - sc.waves.begin());
    const int past = std::min(cfg.past, t);
    const int future = std::min(cfg.future, static_cast<int>(sc.wave_count()) - 1 - t);
    const FrequencyTable ft = population_table(sc, t, past, future);
    const BoundsResult bounds = longitudinal_bounds(ft);
    const FeasibleRange range = oracle_range(ft, cfg.oracle_grid);
    const bool crossed = bounds.informative && bounds.lower > bounds.upper + cfg.check_eps;
    bool agree;
    if (!range.feasible) {
      agree = crossed || !bounds.informative;
    } else {
      agree = std::abs(range.min_pi - bounds.lower) <= cfg.oracle_grid &&
              std::abs(range.max_pi - bounds.upper) <= cfg.oracle_grid;
    }
    std::vector<ReportCell> row;
    row.push_back(ReportCell::count(wave));
    row.push_back(ReportCell::count(past));
    row.push_back(ReportCell::count(future));
    row.push_back(ReportCell::num(bounds.lower));
    row.push_back(ReportCell::num(bounds.upper));
    if (range.feasible) {
      row.push_back(ReportCell::num(range.min_pi));
      row.push_back(ReportCell::num(range.max_pi));
    } else {
      row.push_back(ReportCell::empty());
      row.push_back(ReportCell::empty());
    }
    row.push_back(ReportCell::boolean(range.feasible));
    row.push_back(ReportCell::num(range.grid_step));
    row.push_back(ReportCell::boolean(agree));
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace mtbounds
