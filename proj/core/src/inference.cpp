#include "mtbounds/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "mtbounds/errors.hpp"
#include "mtbounds/stats.hpp"

namespace mtbounds {

namespace {

struct TermTracker {
  std::string label;
  double full_value = 0.0;
  RunningStat stat;
  int degenerate = 0;
};

std::vector<TermEstimate> finalize_terms(std::vector<TermTracker>& trackers, int replicates) {
  std::vector<TermEstimate> out;
  out.reserve(trackers.size());
  for (auto& t : trackers) {
    TermEstimate e;
    e.label = t.label;
    e.value = t.full_value;
    e.se = t.stat.sd();
    e.degenerate = t.degenerate;
    e.se_unreliable = t.degenerate * 10 > replicates;
    out.push_back(std::move(e));
  }
  return out;
}

void accumulate(std::vector<TermTracker>& trackers, const std::vector<Candidate>& resampled) {
  for (auto& t : trackers) {
    const auto it = std::find_if(resampled.begin(), resampled.end(),
                                 [&](const Candidate& c) { return c.label == t.label; });
    if (it == resampled.end()) {
      ++t.degenerate;
    } else {
      t.stat.add(it->value);
    }
  }
}

}  // namespace

TermEstimates bootstrap_terms(const IndicatorPanel& ip, const BootstrapSpec& spec,
                              int replicates, std::uint64_t seed) {
  if (replicates < 2) {
    throw std::invalid_argument("bootstrap_terms: need at least 2 replicates");
  }
  const FrequencyTable full = frequencies(ip, spec.target_index, spec.past, spec.future);
  const CandidateSet full_terms = candidate_terms(full);

  std::vector<TermTracker> lower_track, upper_track;
  for (const auto& c : full_terms.lower) lower_track.push_back({c.label, c.value, {}, 0});
  for (const auto& c : full_terms.upper) upper_track.push_back({c.label, c.value, {}, 0});

  // Units with the same event profile are exchangeable, so a unit-level
  // resample reduces to a multinomial over profile classes.
  std::map<std::uint32_t, std::pair<UnitEventProfile, double>> classes;
  for (const auto& unit : ip.units) {
    const UnitEventProfile p = scan_unit(unit, spec.target_index, spec.past, spec.future);
    const std::uint32_t key = static_cast<std::uint32_t>(p.target) |
                              (static_cast<std::uint32_t>(p.past_run) << 8) |
                              (static_cast<std::uint32_t>(p.future_run) << 16);
    auto [it, inserted] = classes.try_emplace(key, std::make_pair(p, 0.0));
    it->second.second += 1.0;
  }
  const auto n = static_cast<std::int64_t>(ip.units.size());

  std::vector<std::pair<UnitEventProfile, double>> resampled;
  resampled.reserve(classes.size());
  for (int b = 0; b < replicates; ++b) {
    auto rng = substream(seed, static_cast<std::uint64_t>(b));
    resampled.clear();
    std::int64_t remaining = n;
    double prob_left = 1.0;
    for (const auto& [key, entry] : classes) {
      if (remaining <= 0) break;
      const double p = entry.second / static_cast<double>(n);
      double cond = prob_left > 0.0 ? p / prob_left : 1.0;
      cond = std::clamp(cond, 0.0, 1.0);
      std::int64_t draw;
      if (cond >= 1.0) {
        draw = remaining;
      } else {
        std::binomial_distribution<std::int64_t> dist(remaining, cond);
        draw = dist(rng);
      }
      if (draw > 0) resampled.emplace_back(entry.first, static_cast<double>(draw));
      remaining -= draw;
      prob_left -= p;
    }
    const FrequencyTable ft = table_from_profiles(resampled, full.target_wave_label,
                                                  spec.target_index, spec.past, spec.future);
    if (ft.survivors <= 0) {
      for (auto& t : lower_track) ++t.degenerate;
      for (auto& t : upper_track) ++t.degenerate;
      continue;
    }
    const CandidateSet cs = candidate_terms(ft);
    accumulate(lower_track, cs.lower);
    accumulate(upper_track, cs.upper);
  }

  TermEstimates out;
  out.replicates = replicates;
  out.lower = finalize_terms(lower_track, replicates);
  out.upper = finalize_terms(upper_track, replicates);
  return out;
}

double solve_c(double delta, double sigma_max, double alpha) {
  if (!(sigma_max > 0.0)) {
    throw std::invalid_argument("solve_c: sigma_max must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("solve_c: alpha must lie in (0,1)");
  }
  const double shift = delta / sigma_max;
  const auto f = [&](double c) {
    return normal_cdf(c + shift) - normal_cdf(-c) - (1.0 - alpha);
  };
  if (f(0.0) >= 0.0) return 0.0;
  double hi = normal_quantile(1.0 - alpha / 2.0) + 2.0;
  // Crossed bound estimates (delta < 0) push the root past the usual bracket.
  while (f(hi) < 0.0 && hi < 1e4) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Selection select_indices(const TermEstimates& terms) {
  if (terms.lower.empty()) {
    throw InferenceError("no usable lower-bound candidate");
  }
  if (terms.upper.empty()) {
    throw InferenceError("no usable upper-bound candidate");
  }
  Selection sel;
  for (std::size_t i = 1; i < terms.lower.size(); ++i) {
    if (terms.lower[i].value > terms.lower[sel.lower_index].value) sel.lower_index = i;
  }
  for (std::size_t i = 1; i < terms.upper.size(); ++i) {
    if (terms.upper[i].value < terms.upper[sel.upper_index].value) sel.upper_index = i;
  }
  sel.lower_label = terms.lower[sel.lower_index].label;
  sel.upper_label = terms.upper[sel.upper_index].label;
  return sel;
}

IntervalResult ci_construct(const TermEstimates& terms, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ci_construct: alpha must lie in (0,1)");
  }
  const Selection sel = select_indices(terms);
  const TermEstimate& lo = terms.lower[sel.lower_index];
  const TermEstimate& hi = terms.upper[sel.upper_index];
  const double sigma_max = std::max(lo.se, hi.se);
  // Both ses zero: the estimates are exact and the interval is the bounds.
  const double c = sigma_max > 0.0 ? solve_c(hi.value - lo.value, sigma_max, alpha) : 0.0;

  IntervalResult out;
  out.alpha = alpha;
  out.c_value = c;
  out.selected_lower = sel.lower_label;
  out.selected_upper = sel.upper_label;
  out.lower_end = lo.value - c * lo.se;
  out.upper_end = hi.value + c * hi.se;
  out.terms = terms;
  return out;
}

IntervalResult ci_aggregate(const std::vector<StratumTerms>& per_stratum, double alpha) {
  if (per_stratum.empty()) {
    throw std::invalid_argument("ci_aggregate: no strata");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ci_aggregate: alpha must lie in (0,1)");
  }
  double lower_value = 0.0, upper_value = 0.0;
  double lower_var = 0.0, upper_var = 0.0;
  std::string lower_labels, upper_labels;
  TermEstimates pooled_terms;
  for (const auto& s : per_stratum) {
    Selection sel;
    try {
      sel = select_indices(s.terms);
    } catch (const InferenceError& e) {
      throw InferenceError("stratum " + s.key + ": " + e.what());
    }
    const TermEstimate& lo = s.terms.lower[sel.lower_index];
    const TermEstimate& hi = s.terms.upper[sel.upper_index];
    lower_value += s.weight * lo.value;
    upper_value += s.weight * hi.value;
    lower_var += s.weight * s.weight * lo.se * lo.se;
    upper_var += s.weight * s.weight * hi.se * hi.se;
    if (!lower_labels.empty()) lower_labels += ';';
    if (!upper_labels.empty()) upper_labels += ';';
    lower_labels += s.key + ":" + lo.label;
    upper_labels += s.key + ":" + hi.label;
    TermEstimate lw = lo, up = hi;
    lw.label = s.key + ":" + lo.label;
    up.label = s.key + ":" + hi.label;
    pooled_terms.lower.push_back(std::move(lw));
    pooled_terms.upper.push_back(std::move(up));
    pooled_terms.replicates = std::max(pooled_terms.replicates, s.terms.replicates);
  }
  const double lower_se = std::sqrt(lower_var);
  const double upper_se = std::sqrt(upper_var);
  const double sigma_max = std::max(lower_se, upper_se);
  const double c =
      sigma_max > 0.0 ? solve_c(upper_value - lower_value, sigma_max, alpha) : 0.0;

  IntervalResult out;
  out.alpha = alpha;
  out.c_value = c;
  out.selected_lower = lower_labels;
  out.selected_upper = upper_labels;
  out.lower_end = lower_value - c * lower_se;
  out.upper_end = upper_value + c * upper_se;
  out.terms = std::move(pooled_terms);
  return out;
}

}  // namespace mtbounds
