#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mtbounds/frequency.hpp"
#include "mtbounds/panel.hpp"

namespace mtbounds {

// Synthetic populations over a finite (outcome, missing-type, survival)
// chain, with exact forward enumeration for population quantities, a
// grid-search feasibility oracle used to verify that the analytic bounds are
// sharp, and a coverage Monte Carlo harness.

/// P(R_w | Y_w, R_{w-1}): rows indexed by the current outcome and the
/// previous-wave indicator, columns by the drawn indicator.
struct MissingnessKernel {
  enum Prev : int { kInitial = 0, kPrevObserved = 1, kPrevMar = 2, kPrevMnar = 3 };
  enum Draw : int { kObserved = 0, kMar = 1, kMnar = 2 };

  // probs[y][prev][draw]
  std::array<std::array<std::array<double, 3>, 4>, 2> probs{};

  static MissingnessKernel uniform(const std::array<double, 3>& row);
  static MissingnessKernel by_outcome(const std::array<double, 3>& y0,
                                      const std::array<double, 3>& y1);
  static MissingnessKernel by_previous(const std::array<double, 3>& initial,
                                       const std::array<double, 3>& prev_observed,
                                       const std::array<double, 3>& prev_mar,
                                       const std::array<double, 3>& prev_mnar);
  /// True when every row is identical across the outcome index, which makes
  /// the missing process independent of the outcome process by construction.
  bool outcome_free() const;
};

struct Scenario {
  std::vector<int> waves;                  // labels, strictly increasing
  double initial_prevalence = 0.0;
  std::vector<double> infection_hazard;    // size T-1: P(Y_{w+1}=1 | Y_w=0)
  // Death between waves, evaluated on the outcome when leaving wave w; empty
  // means no deaths. Death is absorbing.
  std::vector<double> death_hazard_y0;     // size T-1 or empty
  std::vector<double> death_hazard_y1;
  std::vector<MissingnessKernel> missingness;  // size T
  // Declares that the MAR-type missingness assumption holds at every wave
  // (e.g. every kernel is outcome_free and death is outcome-free or absent).
  bool mar_holds = false;
  std::vector<std::string> mar_reason_labels{"moved"};
  std::vector<std::string> mnar_reason_labels{"refused"};

  void check() const;  // throws ConfigError on malformed scenarios
  Classification classification() const;
  std::size_t wave_count() const { return waves.size(); }
};

/// n unit records sampled i.i.d. from the scenario; deterministic given seed.
Panel generate(const Scenario& sc, std::size_t n, std::uint64_t seed);

/// Exact event probabilities (no sampling) by enumerating every trajectory of
/// the finite chain.
FrequencyTable population_table(const Scenario& sc, int target_index, int past, int future);

/// True prevalence among survivors at the target wave, exactly.
double population_prevalence(const Scenario& sc, int target_index);

// ---------------------------------------------------------------------------
// Feasibility oracle.

struct FeasibleRange {
  double min_pi = 0.0;
  double max_pi = 1.0;
  double grid_step = 1e-3;
  bool feasible = true;  // false: no full-data distribution matches the table
};

/// Enumerates, on a grid over the unidentified outcome conditionals, every
/// full-data distribution consistent with the table's event masses, the
/// MAR-type mean constraint and zero mass on non-monotone outcome paths, and
/// returns the attained prevalence range. Independent of the bound formulas;
/// restricted to windows of at most 3 waves and grid_step >= 1e-4.
FeasibleRange oracle_range(const FrequencyTable& ft, double grid_step = 1e-3);

// ---------------------------------------------------------------------------
// Coverage Monte Carlo.

struct CoverageSpec {
  int target_index = 0;
  int past = 0;
  int future = 0;
  std::size_t sample_size = 2000;
  int replicates = 1000;
  double alpha = 0.05;
  int bootstrap = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

struct CoverageReport {
  int replicates = 0;
  int covered = 0;
  int failed = 0;        // replicates where interval construction errored
  double true_pi = 0.0;
  double alpha = 0.05;
  double mean_width = 0.0;
  double coverage() const { return static_cast<double>(covered) / replicates; }
  /// Binomial Monte Carlo standard error of the coverage estimate.
  double mc_se() const;
};

/// Fraction of replicates whose interval covers the true prevalence.
/// Requires a scenario declared mar_holds. Replicates run in parallel; each
/// derives its stream from (seed, replicate), so the result is independent of
/// scheduling order.
CoverageReport coverage_study(const Scenario& sc, const CoverageSpec& spec);

}  // namespace mtbounds
