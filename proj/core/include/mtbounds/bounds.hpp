#pragma once

#include <string>
#include <vector>

#include "mtbounds/frequency.hpp"

namespace mtbounds {

// Candidate labels are stable strings so inference and reports can cite which
// bound term was active: "worst-case", "thm1", "past-run/mnar",
// "past-run/mar0", "future-run/mnar", "future-run/mar0".

struct Candidate {
  std::string label;
  double value = 0.0;
};

struct BoundsResult {
  double lower = 0.0;
  double upper = 1.0;
  // lower = max over lower_candidates, upper = min over upper_candidates for
  // per-stratum results; for aggregated results the candidates hold weighted
  // per-stratum contributions and the bound is their sum.
  std::vector<Candidate> lower_candidates;
  std::vector<Candidate> upper_candidates;
  int target_wave_label = 0;
  int past_horizon = 0;
  int future_horizon = 0;
  // False when a side has no usable candidate (bounds fall back to [0,1]).
  // An informative result may still have lower > upper: crossed bounds are
  // evidence against the assumptions and are reported by diagnostics, never
  // silently clamped.
  bool informative = true;
  bool aggregated = false;
  std::vector<std::string> notes;
};

/// Worst-case bounds using only the binary missing/observed coarsening:
/// [observed positive share, observed positive share + missing share].
BoundsResult worst_case_bounds(const FrequencyTable& ft);

/// Type-sharpened single-wave bounds: MAR-type missing mass is removed from
/// the denominator. Uninformative (and flagged) when every survivor is
/// MAR-type missing.
BoundsResult sharpened_bounds(const FrequencyTable& ft);

/// Multi-wave bounds under outcome monotonicity; reduces exactly to
/// sharpened_bounds when the table carries no run events.
BoundsResult longitudinal_bounds(const FrequencyTable& ft);

/// The labeled candidate terms behind longitudinal_bounds, exposed so that
/// resampling can track each term separately.
struct CandidateSet {
  std::vector<Candidate> lower;
  std::vector<Candidate> upper;
  std::vector<std::string> notes;
};
CandidateSet candidate_terms(const FrequencyTable& ft);

/// Covariate-averaged bounds: weighted sum of per-stratum bounds with the
/// per-stratum extrema already taken. Weights must sum to 1. Any
/// uninformative stratum contributes [0,1] and flags the aggregate.
struct WeightedBounds {
  std::string stratum;
  BoundsResult result;
  double weight = 1.0;
};
BoundsResult aggregate_bounds(const std::vector<WeightedBounds>& per_stratum);

}  // namespace mtbounds
