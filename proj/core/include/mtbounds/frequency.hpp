#pragma once

#include <vector>

#include "mtbounds/panel.hpp"

namespace mtbounds {

// Event masses over survivors at the target wave. Built from data the fields
// are exact integer counts (stored as doubles); built from a population they
// are exact probability masses. Bound estimators form each frequency as a
// single ratio of these fields, so count-built tables stay in exact
// integer-ratio arithmetic until the final division.
struct FrequencyTable {
  int target_wave_label = 0;
  int target_index = 0;
  int past_horizon = 0;    // number of earlier waves used
  int future_horizon = 0;  // number of later waves used

  double survivors = 0;         // units alive at the target wave
  double observed = 0;          // outcome observed at target, among survivors
  double observed_positive = 0; // outcome observed and equal to 1
  double mar_missing = 0;       // MAR-type missing at target
  double mnar_missing = 0;      // MNAR-type missing at target

  // Run events, one entry per look-back/look-ahead distance i=1..I, j=1..J.
  // past_*_run[i-1]: outcome observed positive i waves before the target,
  // not observed strictly in between, split by the target-wave missing type.
  // future_*_run[j-1]: alive and observed negative j waves after the target,
  // not observed strictly in between, split by the target-wave missing type.
  std::vector<double> past_mnar_run;
  std::vector<double> past_mar_run;
  std::vector<double> future_mnar_run;
  std::vector<double> future_mar_run;

  double not_mar() const { return survivors - mar_missing; }
  double past_mnar_total() const;
  double past_mar_total() const;
  double future_mnar_total() const;
  double future_mar_total() const;
};

/// How a single unit enters the frequency table: its target-wave state plus
/// the unique run distances (0 = none) at which it feeds a run event. Units
/// with identical profiles are exchangeable for every estimator built on the
/// table, which is what the bootstrap collapses on.
struct UnitEventProfile {
  enum class Target : unsigned char { Dead, ObservedPositive, ObservedNegative, Mar, Mnar };
  Target target = Target::Dead;
  int past_run = 0;    // i in 1..past, or 0
  int future_run = 0;  // j in 1..future, or 0
  bool alive() const { return target != Target::Dead; }
};

UnitEventProfile scan_unit(const IndicatorUnit& unit, int target_index, int past, int future);

/// Exact event counts over survivors at the target wave.
/// Requires 0 <= target_index - past and target_index + future < wave count.
/// Throws EstimationError when no unit is alive at the target wave.
FrequencyTable frequencies(const IndicatorPanel& ip, int target_index, int past, int future);

/// Rebuilds a table from profile counts (the bootstrap path). Does not throw
/// on an empty survivor set; callers check `survivors`.
FrequencyTable table_from_profiles(const std::vector<std::pair<UnitEventProfile, double>>& counts,
                                   int target_wave_label, int target_index, int past, int future);

}  // namespace mtbounds
