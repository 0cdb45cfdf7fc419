#include "mtbounds/diagnostics.hpp"

#include <stdexcept>

#include "mtbounds/errors.hpp"
#include "mtbounds/stats.hpp"

namespace mtbounds {

namespace {

ConditionReport make_report(std::string id, double lhs, double rhs, double eps) {
  ConditionReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.satisfied = r.slack >= -eps;
  return r;
}

ConditionReport vacuous_report(std::string id, std::string note) {
  ConditionReport r;
  r.id = std::move(id);
  r.vacuous = true;
  r.satisfied = true;
  r.note = std::move(note);
  return r;
}

}  // namespace

ConditionReport check_cor1(const FrequencyTable& ft, double eps) {
  if (ft.future_horizon < 1) {
    throw std::invalid_argument("cor1 needs a table with future horizon >= 1");
  }
  if (ft.mar_missing <= 0) {
    return vacuous_report("cor1", "no MAR-type missing at target");
  }
  if (ft.not_mar() <= 0) {
    return vacuous_report("cor1", "single-wave bounds uninformative");
  }
  const double lhs = ft.observed_positive / ft.not_mar();
  const double rhs = 1.0 - ft.future_mar_run[0] / ft.mar_missing;
  return make_report("cor1", lhs, rhs, eps);
}

ConditionReport check_cor2(const FrequencyTable& ft, double eps) {
  if (ft.past_horizon < 1) {
    throw std::invalid_argument("cor2 needs a table with past horizon >= 1");
  }
  if (ft.mar_missing <= 0) {
    return vacuous_report("cor2", "no MAR-type missing at target");
  }
  if (ft.not_mar() <= 0) {
    return vacuous_report("cor2", "single-wave bounds uninformative");
  }
  const double lhs = ft.past_mar_run[0] / ft.mar_missing;
  const double rhs = (ft.observed_positive + ft.mnar_missing) / ft.not_mar();
  return make_report("cor2", lhs, rhs, eps);
}

std::array<ConditionReport, 4> check_cor3(const FrequencyTable& ft, double eps) {
  if (ft.past_horizon < 1 || ft.future_horizon < 1) {
    throw std::invalid_argument("cor3 needs past and future horizons >= 1");
  }
  std::array<ConditionReport, 4> out;

  if (ft.mnar_missing <= 0) {
    out[0] = vacuous_report("cor3.1", "no MNAR-type missing at target");
  } else {
    out[0] = make_report("cor3.1",
                         ft.future_mnar_run[0] / ft.mnar_missing +
                             ft.past_mnar_run[0] / ft.mnar_missing,
                         1.0, eps);
  }

  if (ft.mar_missing <= 0) {
    out[1] = vacuous_report("cor3.2", "no MAR-type missing at target");
  } else {
    out[1] = make_report("cor3.2",
                         ft.future_mar_run[0] / ft.mar_missing +
                             ft.past_mar_run[0] / ft.mar_missing,
                         1.0, eps);
  }

  const double denom = ft.not_mar();
  if (ft.mar_missing <= 0) {
    out[2] = vacuous_report("cor3.3", "no MAR-type missing at target");
    out[3] = vacuous_report("cor3.4", "no MAR-type missing at target");
  } else if (denom <= 0) {
    out[2] = vacuous_report("cor3.3", "single-wave bounds uninformative");
    out[3] = vacuous_report("cor3.4", "single-wave bounds uninformative");
  } else {
    out[2] = make_report("cor3.3",
                         ft.future_mar_run[0] / ft.mar_missing +
                             ft.past_mnar_run[0] / denom,
                         1.0 - ft.observed_positive / denom, eps);
    out[3] = make_report("cor3.4",
                         ft.past_mar_run[0] / ft.mar_missing +
                             ft.future_mnar_run[0] / denom,
                         (ft.observed_positive + ft.mnar_missing) / denom, eps);
  }
  return out;
}

ConditionReport check_consistency(const BoundsResult& br, double eps) {
  if (!br.informative) {
    return vacuous_report("generic(" + std::to_string(br.past_horizon) + "," +
                              std::to_string(br.future_horizon) + ")",
                          "bounds uninformative");
  }
  return make_report("generic(" + std::to_string(br.past_horizon) + "," +
                         std::to_string(br.future_horizon) + ")",
                     br.lower, br.upper, eps);
}

std::vector<ConditionReport> applicable_checks(const FrequencyTable& ft, double eps) {
  std::vector<ConditionReport> out;
  if (ft.future_horizon >= 1) out.push_back(check_cor1(ft, eps));
  if (ft.past_horizon >= 1) out.push_back(check_cor2(ft, eps));
  if (ft.past_horizon >= 1 && ft.future_horizon >= 1) {
    for (auto& r : check_cor3(ft, eps)) out.push_back(std::move(r));
  }
  out.push_back(check_consistency(longitudinal_bounds(ft), eps));
  return out;
}

double condition_bootstrap_support(const IndicatorPanel& ip, int target_index, int past,
                                   int future, const std::string& condition_id, int replicates,
                                   std::uint64_t seed, double eps) {
  if (replicates < 1) {
    throw std::invalid_argument("condition_bootstrap_support: replicates must be >= 1");
  }
  const std::size_t n = ip.units.size();
  if (n == 0) throw EstimationError("condition_bootstrap_support: empty panel");

  auto evaluate = [&](const IndicatorPanel& panel) -> bool {
    FrequencyTable ft;
    try {
      ft = frequencies(panel, target_index, past, future);
    } catch (const EstimationError&) {
      return true;  // no survivors: vacuously satisfied
    }
    for (const auto& r : applicable_checks(ft, eps)) {
      if (r.id == condition_id) return r.satisfied;
    }
    throw ConfigError("condition not applicable at these horizons: " + condition_id);
  };
  // Fail fast on unknown ids before resampling.
  (void)evaluate(ip);

  int hold = 0;
  IndicatorPanel resampled;
  resampled.waves = ip.waves;
  resampled.units.resize(n);
  for (int b = 0; b < replicates; ++b) {
    auto rng = substream(seed, static_cast<std::uint64_t>(b));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) resampled.units[i] = ip.units[pick(rng)];
    if (evaluate(resampled)) ++hold;
  }
  return static_cast<double>(hold) / static_cast<double>(replicates);
}

}  // namespace mtbounds
