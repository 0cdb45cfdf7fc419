#pragma once

#include <cstdint>
#include <random>

namespace mtbounds {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile for p in (0,1).
double normal_quantile(double p);

/// SplitMix64 finalizer; used to derive independent substreams.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic substream for (seed, index). Replicates, units and strata
/// each draw from their own stream so results do not depend on scheduling.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Online mean/variance accumulator (Welford).
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  // Sample standard deviation (n-1 denominator); 0 for fewer than 2 points.
  double sd() const;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace mtbounds
