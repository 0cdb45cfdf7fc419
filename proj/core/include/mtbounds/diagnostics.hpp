#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mtbounds/bounds.hpp"
#include "mtbounds/frequency.hpp"

namespace mtbounds {

// Observed-data inequalities that can falsify the conjunction of the partial
// missing-at-random assumption and outcome monotonicity. Each check compares
// lhs <= rhs; a violation means the data contradict the assumption pair at
// the chosen horizons.

struct ConditionReport {
  std::string id;  // "cor1", "cor2", "cor3.1".."cor3.4", "generic(I,J)"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;      // rhs - lhs
  bool satisfied = true;   // slack >= -eps
  bool vacuous = false;    // conditioning event carries no data
  std::string note;
};

/// Two-wave check using the wave after the target; needs future_horizon >= 1.
ConditionReport check_cor1(const FrequencyTable& ft, double eps = 0.0);

/// Two-wave check using the wave before the target; needs past_horizon >= 1.
ConditionReport check_cor2(const FrequencyTable& ft, double eps = 0.0);

/// The four three-wave checks; needs past_horizon >= 1 and future_horizon >= 1.
std::array<ConditionReport, 4> check_cor3(const FrequencyTable& ft, double eps = 0.0);

/// Generic lower <= upper consistency of a bounds result.
ConditionReport check_consistency(const BoundsResult& br, double eps = 0.0);

/// Every check applicable at the table's horizons, consistency last.
std::vector<ConditionReport> applicable_checks(const FrequencyTable& ft, double eps = 0.0);

/// Advisory bootstrap support for a condition: the share of unit-level
/// resamples in which the condition holds (vacuous resamples count as
/// satisfied). This is a resampling summary, not a calibrated test.
double condition_bootstrap_support(const IndicatorPanel& ip, int target_index, int past,
                                   int future, const std::string& condition_id, int replicates,
                                   std::uint64_t seed, double eps = 0.0);

}  // namespace mtbounds
