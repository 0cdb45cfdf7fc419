#include "mtbounds/frequency.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "mtbounds/errors.hpp"

namespace mtbounds {

namespace {

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void check_window(int wave_count, int target_index, int past, int future) {
  if (past < 0 || future < 0) {
    throw std::invalid_argument("horizons must be nonnegative");
  }
  if (target_index < 0 || target_index >= wave_count) {
    throw std::invalid_argument("target wave index out of range");
  }
  if (target_index - past < 0 || target_index + future >= wave_count) {
    throw std::invalid_argument("horizon reaches outside the wave range");
  }
}

void add_profile(FrequencyTable& ft, const UnitEventProfile& p, double mass) {
  using Target = UnitEventProfile::Target;
  if (!p.alive()) return;
  ft.survivors += mass;
  switch (p.target) {
    case Target::ObservedPositive:
      ft.observed += mass;
      ft.observed_positive += mass;
      break;
    case Target::ObservedNegative:
      ft.observed += mass;
      break;
    case Target::Mar:
      ft.mar_missing += mass;
      if (p.past_run > 0) ft.past_mar_run[static_cast<std::size_t>(p.past_run - 1)] += mass;
      if (p.future_run > 0) ft.future_mar_run[static_cast<std::size_t>(p.future_run - 1)] += mass;
      break;
    case Target::Mnar:
      ft.mnar_missing += mass;
      if (p.past_run > 0) ft.past_mnar_run[static_cast<std::size_t>(p.past_run - 1)] += mass;
      if (p.future_run > 0) ft.future_mnar_run[static_cast<std::size_t>(p.future_run - 1)] += mass;
      break;
    case Target::Dead:
      break;
  }
}

FrequencyTable empty_table(int target_wave_label, int target_index, int past, int future) {
  FrequencyTable ft;
  ft.target_wave_label = target_wave_label;
  ft.target_index = target_index;
  ft.past_horizon = past;
  ft.future_horizon = future;
  ft.past_mnar_run.assign(static_cast<std::size_t>(past), 0.0);
  ft.past_mar_run.assign(static_cast<std::size_t>(past), 0.0);
  ft.future_mnar_run.assign(static_cast<std::size_t>(future), 0.0);
  ft.future_mar_run.assign(static_cast<std::size_t>(future), 0.0);
  return ft;
}

}  // namespace

double FrequencyTable::past_mnar_total() const { return sum(past_mnar_run); }
double FrequencyTable::past_mar_total() const { return sum(past_mar_run); }
double FrequencyTable::future_mnar_total() const { return sum(future_mnar_run); }
double FrequencyTable::future_mar_total() const { return sum(future_mar_run); }

UnitEventProfile scan_unit(const IndicatorUnit& unit, int target_index, int past, int future) {
  using Target = UnitEventProfile::Target;
  UnitEventProfile p;
  const auto& cells = unit.cells;
  const auto t = static_cast<std::size_t>(target_index);
  const IndicatorCell at_t = cells[t];
  if (at_t.r == MissingIndicator::DeadR) return p;

  switch (at_t.r) {
    case MissingIndicator::ObservedR:
      p.target = at_t.outcome == 1 ? Target::ObservedPositive : Target::ObservedNegative;
      return p;  // run events feed only missing targets
    case MissingIndicator::MarR:
      p.target = Target::Mar;
      break;
    case MissingIndicator::MnarR:
      p.target = Target::Mnar;
      break;
    case MissingIndicator::DeadR:
      return p;
  }

  // Most recent earlier wave with an observed outcome; the unit feeds a past
  // run when that outcome was positive (the waves in between carry no
  // observation by construction).
  for (int i = 1; i <= past; ++i) {
    const auto w = t - static_cast<std::size_t>(i);
    if (cells[w].r == MissingIndicator::ObservedR) {
      if (cells[w].outcome == 1) p.past_run = i;
      break;
    }
  }
  // Nearest later wave, still alive, with an observed outcome; the unit feeds
  // a future run when that outcome was negative.
  for (int j = 1; j <= future; ++j) {
    const auto w = t + static_cast<std::size_t>(j);
    if (cells[w].r == MissingIndicator::DeadR) break;
    if (cells[w].r == MissingIndicator::ObservedR) {
      if (cells[w].outcome == 0) p.future_run = j;
      break;
    }
  }
  return p;
}

FrequencyTable frequencies(const IndicatorPanel& ip, int target_index, int past, int future) {
  check_window(static_cast<int>(ip.waves.size()), target_index, past, future);
  FrequencyTable ft = empty_table(ip.waves[static_cast<std::size_t>(target_index)],
                                  target_index, past, future);
  for (const auto& unit : ip.units) {
    add_profile(ft, scan_unit(unit, target_index, past, future), 1.0);
  }
  if (ft.survivors <= 0) {
    throw EstimationError("empty survivor set at wave " +
                          std::to_string(ft.target_wave_label));
  }
  return ft;
}

FrequencyTable table_from_profiles(const std::vector<std::pair<UnitEventProfile, double>>& counts,
                                   int target_wave_label, int target_index, int past, int future) {
  FrequencyTable ft = empty_table(target_wave_label, target_index, past, future);
  for (const auto& [profile, mass] : counts) add_profile(ft, profile, mass);
  return ft;
}

}  // namespace mtbounds
