#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtbounds/errors.hpp"
#include "mtbounds/simlab.hpp"

namespace mtbounds {

namespace {

constexpr double kMassTol = 1e-9;   // slack for masses that must be nonnegative
constexpr double kThetaTol = 1e-9;  // slack for solved conditionals in [0,1]

struct RangeCollector {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  void add(double pi) {
    if (!any) {
      lo = hi = pi;
      any = true;
    } else {
      lo = std::min(lo, pi);
      hi = std::max(hi, pi);
    }
  }
};

}  // namespace

// Feasible full-data distributions, conditional on survivors at the target
// wave, decompose into five groups by the target indicator and what the
// window observations force about the target outcome under monotonicity:
//   observed positive / observed negative           (outcome known),
//   missing with an earlier observed positive       (forced to 1),
//   missing with a later observed negative, alive   (forced to 0),
//   missing with neither                            (free conditional).
// The run events in the table pin exactly the forced masses, so the only
// unidentified parameters are the outcome conditionals of the two free
// masses. The MAR-type mean constraint ties the MAR-side conditional to the
// prevalence itself; the MNAR-side conditional is enumerated on a grid.
FeasibleRange oracle_range(const FrequencyTable& ft, double grid_step) {
  if (!(grid_step >= 1e-4)) {
    throw std::invalid_argument("oracle_range: grid_step must be >= 1e-4");
  }
  if (ft.past_horizon + ft.future_horizon > 2) {
    throw std::invalid_argument("oracle_range: window limited to 3 waves");
  }
  if (ft.survivors <= 0.0) {
    throw EstimationError("oracle_range: empty survivor set");
  }

  const double total = ft.survivors;
  const double obs_pos = ft.observed_positive / total;
  const double mnar = ft.mnar_missing / total;
  const double mar = ft.mar_missing / total;
  const double forced1_mnar = ft.past_mnar_total() / total;
  const double forced0_mnar = ft.future_mnar_total() / total;
  const double forced1_mar = ft.past_mar_total() / total;
  const double forced0_mar = ft.future_mar_total() / total;

  FeasibleRange out;
  out.grid_step = grid_step;

  double free_mnar = mnar - forced1_mnar - forced0_mnar;
  double free_mar = mar - forced1_mar - forced0_mar;
  if (free_mnar < -kMassTol || free_mar < -kMassTol) {
    out.feasible = false;  // forced masses overlap: no monotone completion
    return out;
  }
  free_mnar = std::max(free_mnar, 0.0);
  free_mar = std::max(free_mar, 0.0);

  RangeCollector range;
  const int steps = static_cast<int>(std::ceil(1.0 / grid_step));
  for (int k = 0; k <= steps; ++k) {
    const double theta = std::min(1.0, k * grid_step);  // P(Y=1 | free MNAR mass)
    const double base = obs_pos + forced1_mnar + free_mnar * theta + forced1_mar;
    if (mar <= 0.0) {
      range.add(base);  // no MAR mass: the mean constraint is vacuous
      continue;
    }
    // Solve forced1_mar + free_mar*x = mar * pi with pi = base + free_mar*x
    // for x = P(Y=1 | free MAR mass).
    const double coef = free_mar * (1.0 - mar);
    const double rhs = mar * base - forced1_mar;
    if (std::abs(coef) <= 1e-15) {
      // Degenerate constraint: feasible only where rhs vanishes. The grid may
      // straddle the exact root, so allow one grid cell of slack.
      if (std::abs(rhs) <= kThetaTol + mar * free_mnar * grid_step) {
        range.add(base);
        range.add(base + free_mar);  // x unconstrained when mar == 1
      }
      continue;
    }
    const double x = rhs / coef;
    if (x >= -kThetaTol && x <= 1.0 + kThetaTol) {
      range.add(base + free_mar * std::clamp(x, 0.0, 1.0));
    }
  }

  if (!range.any) {
    out.feasible = false;  // the mean constraint rules out every completion
    return out;
  }
  out.min_pi = range.lo;
  out.max_pi = range.hi;
  return out;
}

}  // namespace mtbounds
