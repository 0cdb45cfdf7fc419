#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtbounds/bounds.hpp"
#include "mtbounds/frequency.hpp"
#include "mtbounds/panel.hpp"

namespace mtbounds {

// Confidence intervals for the partially identified prevalence. The bound
// estimators are maxima/minima of candidate terms, so the interval plugs in
// the selected candidates and widens them by a critical value solved from the
// coverage equation below.

struct TermEstimate {
  std::string label;
  double value = 0.0;  // full-sample estimate of the candidate term
  double se = 0.0;     // bootstrap standard error
  int degenerate = 0;  // resamples in which the term was vacuous
  bool se_unreliable = false;  // more than 10% of resamples degenerate
};

struct TermEstimates {
  std::vector<TermEstimate> lower;
  std::vector<TermEstimate> upper;
  int replicates = 0;
};

struct BootstrapSpec {
  int target_index = 0;
  int past = 0;
  int future = 0;
};

/// Stratified nonparametric bootstrap of every candidate term. Values are
/// full-sample estimates; ses are the standard deviation of each term across
/// unit-level resamples of this panel (call once per stratum so resampling
/// happens within strata). Resample b draws from a stream derived from
/// (seed, b), so results are independent of evaluation order.
TermEstimates bootstrap_terms(const IndicatorPanel& ip, const BootstrapSpec& spec,
                              int replicates, std::uint64_t seed);

/// Critical value C >= 0 solving
///   Phi(C + delta/sigma_max) - Phi(-C) = 1 - alpha
/// by bisection to 1e-8. Requires sigma_max > 0 and alpha in (0,1). The left
/// side increases in C, so the root is unique; it tends to the one-sided
/// normal quantile as delta/sigma_max grows and to the two-sided quantile at
/// delta = 0.
double solve_c(double delta, double sigma_max, double alpha);

struct Selection {
  std::size_t lower_index = 0;
  std::size_t upper_index = 0;
  std::string lower_label;
  std::string upper_label;
};

/// Argmax over lower terms and argmin over upper terms; ties break by list
/// order. Throws InferenceError when a side has no candidates.
Selection select_indices(const TermEstimates& terms);

struct IntervalResult {
  double lower_end = 0.0;
  double upper_end = 0.0;
  double alpha = 0.05;
  double c_value = 0.0;
  std::string selected_lower;
  std::string selected_upper;
  TermEstimates terms;
};

/// Interval [L(q) - C*se_L, U(r) + C*se_U] at the selected candidates. When
/// both selected ses are zero the estimates are treated as exact and C = 0.
IntervalResult ci_construct(const TermEstimates& terms, double alpha);

/// Covariate-averaged interval: candidates are selected per stratum, the
/// weighted sums of the selected terms are pooled with
/// se = sqrt(sum_k w_k^2 se_k^2) (independent strata), and the interval is
/// built on the pooled pair.
struct StratumTerms {
  std::string key;
  TermEstimates terms;
  double weight = 1.0;
};
IntervalResult ci_aggregate(const std::vector<StratumTerms>& per_stratum, double alpha);

}  // namespace mtbounds
