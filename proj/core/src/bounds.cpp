#include "mtbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtbounds {

namespace {

constexpr const char* kWorstCase = "worst-case";
constexpr const char* kThm1 = "thm1";
constexpr const char* kPastMnar = "past-run/mnar";
constexpr const char* kPastMar0 = "past-run/mar0";
constexpr const char* kFutureMnar = "future-run/mnar";
constexpr const char* kFutureMar0 = "future-run/mar0";

BoundsResult shell(const FrequencyTable& ft) {
  BoundsResult r;
  r.target_wave_label = ft.target_wave_label;
  r.past_horizon = ft.past_horizon;
  r.future_horizon = ft.future_horizon;
  return r;
}

void finalize(BoundsResult& r) {
  if (r.lower_candidates.empty() || r.upper_candidates.empty()) {
    r.informative = false;
    r.lower = 0.0;
    r.upper = 1.0;
    return;
  }
  r.lower = std::max_element(r.lower_candidates.begin(), r.lower_candidates.end(),
                             [](const Candidate& a, const Candidate& b) {
                               return a.value < b.value;
                             })
                ->value;
  r.upper = std::min_element(r.upper_candidates.begin(), r.upper_candidates.end(),
                             [](const Candidate& a, const Candidate& b) {
                               return a.value < b.value;
                             })
                ->value;
}

}  // namespace

BoundsResult worst_case_bounds(const FrequencyTable& ft) {
  BoundsResult r = shell(ft);
  const double lower = ft.observed_positive / ft.survivors;
  // Single division keeps the comparison with the sharpened upper bound exact
  // when there is no MAR-type mass.
  const double upper = (ft.observed_positive + ft.mar_missing + ft.mnar_missing) / ft.survivors;
  r.lower_candidates = {{kWorstCase, lower}};
  r.upper_candidates = {{kWorstCase, upper}};
  finalize(r);
  return r;
}

BoundsResult sharpened_bounds(const FrequencyTable& ft) {
  BoundsResult r = shell(ft);
  const double denom = ft.not_mar();
  if (denom <= 0) {
    r.notes.push_back("no outcome ever observable: every survivor is MAR-type missing");
    finalize(r);
    return r;
  }
  r.lower_candidates = {{kThm1, ft.observed_positive / denom}};
  r.upper_candidates = {{kThm1, (ft.observed_positive + ft.mnar_missing) / denom}};
  finalize(r);
  return r;
}

CandidateSet candidate_terms(const FrequencyTable& ft) {
  CandidateSet cs;
  const double denom = ft.not_mar();  // survivors minus MAR-type missing
  const bool has_past = ft.past_horizon > 0;
  const bool has_future = ft.future_horizon > 0;

  if (denom > 0) {
    if (has_past) {
      cs.lower.push_back(
          {kPastMnar, (ft.observed_positive + ft.past_mnar_total()) / denom});
    } else {
      cs.lower.push_back({kThm1, ft.observed_positive / denom});
    }
    if (has_future) {
      cs.upper.push_back(
          {kFutureMnar,
           (ft.observed_positive + ft.mnar_missing - ft.future_mnar_total()) / denom});
    } else {
      cs.upper.push_back({kThm1, (ft.observed_positive + ft.mnar_missing) / denom});
    }
  } else {
    cs.notes.push_back("ratio candidates dropped: every survivor is MAR-type missing");
  }

  if (ft.mar_missing > 0) {
    if (has_past) {
      cs.lower.push_back({kPastMar0, ft.past_mar_total() / ft.mar_missing});
    }
    if (has_future) {
      cs.upper.push_back(
          {kFutureMar0, (ft.mar_missing - ft.future_mar_total()) / ft.mar_missing});
    }
  } else if (has_past || has_future) {
    cs.notes.push_back("MAR-conditional candidates dropped: no MAR-type missing at target");
  }
  return cs;
}

BoundsResult longitudinal_bounds(const FrequencyTable& ft) {
  BoundsResult r = shell(ft);
  CandidateSet cs = candidate_terms(ft);
  r.lower_candidates = std::move(cs.lower);
  r.upper_candidates = std::move(cs.upper);
  r.notes = std::move(cs.notes);
  finalize(r);
  return r;
}

BoundsResult aggregate_bounds(const std::vector<WeightedBounds>& per_stratum) {
  if (per_stratum.empty()) {
    throw std::invalid_argument("aggregate_bounds: no strata");
  }
  double weight_sum = 0.0;
  for (const auto& s : per_stratum) weight_sum += s.weight;
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("aggregate_bounds: weights must sum to 1");
  }

  BoundsResult out;
  out.aggregated = true;
  out.target_wave_label = per_stratum.front().result.target_wave_label;
  out.past_horizon = per_stratum.front().result.past_horizon;
  out.future_horizon = per_stratum.front().result.future_horizon;
  out.lower = 0.0;
  out.upper = 0.0;
  for (const auto& s : per_stratum) {
    double lo = s.result.lower;
    double hi = s.result.upper;
    std::string lo_label = "uninformative";
    std::string hi_label = "uninformative";
    if (!s.result.informative) {
      lo = 0.0;
      hi = 1.0;
      out.informative = false;
      out.notes.push_back("stratum " + s.stratum + " uninformative; contributes [0,1]");
    } else {
      for (const auto& c : s.result.lower_candidates) {
        if (c.value == lo) { lo_label = c.label; break; }
      }
      for (const auto& c : s.result.upper_candidates) {
        if (c.value == hi) { hi_label = c.label; break; }
      }
    }
    out.lower += s.weight * lo;
    out.upper += s.weight * hi;
    out.lower_candidates.push_back({s.stratum + ":" + lo_label, s.weight * lo});
    out.upper_candidates.push_back({s.stratum + ":" + hi_label, s.weight * hi});
  }
  return out;
}

}  // namespace mtbounds
