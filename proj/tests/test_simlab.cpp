#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mtbounds/bounds.hpp"
#include "mtbounds/diagnostics.hpp"
#include "mtbounds/errors.hpp"
#include "mtbounds/inference.hpp"
#include "mtbounds/simlab.hpp"

using namespace mtbounds;
using namespace mtb_test;

TEST_CASE("generate is deterministic and respects a zero infection hazard") {
  const auto sc = independent_scenario(3);
  const Panel a = generate(sc, 300, 77);
  const Panel b = generate(sc, 300, 77);
  REQUIRE(a.units.size() == b.units.size());
  for (std::size_t i = 0; i < a.units.size(); ++i) {
    CHECK(a.units[i].cells == b.units[i].cells);
  }
  // No infection: observed outcomes never change within a unit.
  for (const auto& unit : a.units) {
    int seen = -1;
    for (const auto& cell : unit.cells) {
      if (!is_observed(cell)) continue;
      const int y = std::get<ObservedCell>(cell).outcome;
      if (seen >= 0) CHECK(y == seen);
      seen = y;
    }
  }
}

TEST_CASE("generated frequencies converge to the population table") {
  const auto sc = outcome_dependent_scenario();
  const std::size_t n = 100000;
  const Panel panel = generate(sc, n, 2025);
  const auto ip = classify(panel, sc.classification());
  const auto sample = frequencies(ip, 0, 0, 1);
  const auto pop = population_table(sc, 0, 0, 1);

  const auto close = [&](double count, double prob) {
    const double se = std::sqrt(std::max(prob * (1.0 - prob), 1e-12) / n);
    return std::abs(count / n - prob) <= 3.0 * se;
  };
  int misses = 0;
  misses += !close(sample.observed_positive, pop.observed_positive / pop.survivors);
  misses += !close(sample.mar_missing, pop.mar_missing / pop.survivors);
  misses += !close(sample.mnar_missing, pop.mnar_missing / pop.survivors);
  misses += !close(sample.future_mar_run[0], pop.future_mar_run[0] / pop.survivors);
  misses += !close(sample.future_mnar_run[0], pop.future_mnar_run[0] / pop.survivors);
  CHECK(misses <= 1);  // 3-sigma per event, so allow a single straggler
}

TEST_CASE("population table matches the exact finite panel on all events") {
  const auto sc = outcome_dependent_scenario();
  const auto pop = population_table(sc, 0, 0, 1);
  const auto ip = classify(outcome_dependent_panel(), mar_moved());
  const auto exact = frequencies(ip, 0, 0, 1);
  const double n = exact.survivors;
  CHECK(pop.survivors == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pop.observed_positive == doctest::Approx(exact.observed_positive / n).epsilon(1e-12));
  CHECK(pop.mar_missing == doctest::Approx(exact.mar_missing / n).epsilon(1e-12));
  CHECK(pop.mnar_missing == doctest::Approx(exact.mnar_missing / n).epsilon(1e-12));
  CHECK(pop.future_mar_run[0] == doctest::Approx(exact.future_mar_run[0] / n).epsilon(1e-12));
  CHECK(pop.future_mnar_run[0] ==
        doctest::Approx(exact.future_mnar_run[0] / n).epsilon(1e-12));
}

TEST_CASE("population table equals the exact three-wave panel on every event") {
  // Two independent routes to the same distribution: path enumeration over
  // the chain versus per-unit scanning of the exact finite panel.
  const auto pop = population_table(independent_scenario(3), 1, 1, 1);
  const auto ip = classify(independent_panel_3w(), mar_moved());
  const auto exact = frequencies(ip, 1, 1, 1);
  const double n = exact.survivors;
  CHECK(pop.observed_positive == doctest::Approx(exact.observed_positive / n).epsilon(1e-12));
  CHECK(pop.mar_missing == doctest::Approx(exact.mar_missing / n).epsilon(1e-12));
  CHECK(pop.mnar_missing == doctest::Approx(exact.mnar_missing / n).epsilon(1e-12));
  CHECK(pop.past_mar_run[0] == doctest::Approx(exact.past_mar_run[0] / n).epsilon(1e-12));
  CHECK(pop.past_mnar_run[0] == doctest::Approx(exact.past_mnar_run[0] / n).epsilon(1e-12));
  CHECK(pop.future_mar_run[0] == doctest::Approx(exact.future_mar_run[0] / n).epsilon(1e-12));
  CHECK(pop.future_mnar_run[0] ==
        doctest::Approx(exact.future_mnar_run[0] / n).epsilon(1e-12));
}

TEST_CASE("population table and prevalence on canonical scenarios") {
  SUBCASE("outcome-dependent population") {
    const auto sc = outcome_dependent_scenario();
    const auto pop = population_table(sc, 0, 0, 1);
    CHECK(pop.observed_positive == doctest::Approx(0.3).epsilon(1e-12));
    const auto report = check_cor1(pop);
    CHECK(report.lhs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.rhs == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(population_prevalence(sc, 0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(population_prevalence(sc, 1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("fully observed scenario has no missing mass") {
    Scenario sc = independent_scenario(2);
    sc.missingness[0] = MissingnessKernel::uniform({1.0, 0.0, 0.0});
    sc.missingness[1] = MissingnessKernel::uniform({1.0, 0.0, 0.0});
    const auto pop = population_table(sc, 0, 0, 1);
    CHECK(pop.mar_missing == 0.0);
    CHECK(pop.mnar_missing == 0.0);
    CHECK(pop.future_mar_run[0] == 0.0);
    CHECK(pop.observed == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("deaths shrink the survivor mass and prevalence conditions on it") {
    Scenario sc = independent_scenario(2);
    sc.death_hazard_y0 = {0.1};
    sc.death_hazard_y1 = {0.5};
    const auto pop = population_table(sc, 1, 0, 0);
    CHECK(pop.survivors == doctest::Approx(0.7 * 0.9 + 0.3 * 0.5).epsilon(1e-12));
    const double pi = population_prevalence(sc, 1);
    CHECK(pi == doctest::Approx(0.3 * 0.5 / (0.7 * 0.9 + 0.3 * 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("oracle reproduces the sharpened range on the outcome-dependent table") {
  const auto sc = outcome_dependent_scenario();
  const auto ft = population_table(sc, 0, 0, 0);
  const auto range = oracle_range(ft, 1e-3);
  REQUIRE(range.feasible);
  CHECK(std::abs(range.min_pi - 0.5) <= 1e-3);
  CHECK(std::abs(range.max_pi - 1.0) <= 1e-3);
}

TEST_CASE("oracle reproduces the two-wave upper bound improvement") {
  const auto ip = classify(independent_panel_2w(), mar_moved());
  const auto ft = frequencies(ip, 0, 0, 1);
  const auto range = oracle_range(ft, 1e-3);
  REQUIRE(range.feasible);
  CHECK(std::abs(range.max_pi - 0.35) <= 1e-3);
  CHECK(std::abs(range.min_pi - 18.0 / 70.0) <= 1e-3);
}

TEST_CASE("oracle rejects the outcome-dependent two-wave table") {
  const auto sc = outcome_dependent_scenario();
  const auto ft = population_table(sc, 0, 0, 1);
  const auto range = oracle_range(ft, 1e-3);
  CHECK_FALSE(range.feasible);
}

TEST_CASE("oracle rejects the crossing construction used for the second check") {
  const auto ip = classify(crossing_panel_2w(), mar_moved());
  const auto ft = frequencies(ip, 1, 1, 0);
  CHECK_FALSE(oracle_range(ft, 1e-3).feasible);
}

TEST_CASE("oracle guards its preconditions") {
  const auto ip = classify(independent_panel_2w(), mar_moved());
  const auto ft = frequencies(ip, 0, 0, 1);
  CHECK_THROWS_AS(oracle_range(ft, 1e-5), std::invalid_argument);
}

TEST_CASE("oracle matches the analytic bounds on random valid populations") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const auto sc = random_valid_scenario(rng, 3);
    const int windows[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (const auto& w : windows) {
      const auto ft = population_table(sc, 1, w[0], w[1]);
      const auto bounds = longitudinal_bounds(ft);
      const auto range = oracle_range(ft, 1e-3);
      REQUIRE(range.feasible);
      CHECK(std::abs(range.min_pi - bounds.lower) <= 1e-3);
      CHECK(std::abs(range.max_pi - bounds.upper) <= 1e-3);
      ++checked;
    }
  }
  CHECK(checked == 240);
}

TEST_CASE("oracle matches the analytic bounds with two-step run windows") {
  std::mt19937_64 rng(59);
  for (int rep = 0; rep < 40; ++rep) {
    const auto sc = random_valid_scenario(rng, 3);
    for (const auto& [target, past, future] : {std::tuple{2, 2, 0}, std::tuple{0, 0, 2}}) {
      const auto ft = population_table(sc, target, past, future);
      const auto bounds = longitudinal_bounds(ft);
      const auto range = oracle_range(ft, 1e-3);
      REQUIRE(range.feasible);
      CHECK(std::abs(range.min_pi - bounds.lower) <= 1e-3);
      CHECK(std::abs(range.max_pi - bounds.upper) <= 1e-3);
      // Both run distances contribute to the tightening.
      if (past == 2) {
        CHECK(bounds.lower >= sharpened_bounds(ft).lower);
      } else {
        CHECK(bounds.upper <= sharpened_bounds(ft).upper);
      }
    }
  }
}

TEST_CASE("oracle infeasibility coincides with a failed check") {
  std::mt19937_64 rng(47);
  int infeasible_seen = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const Scenario sc = rep % 3 == 0   ? random_valid_scenario(rng, 3, false)
                        : rep % 3 == 1 ? random_violating_scenario(rng, 3)
                                       : padded_outcome_dependent_scenario();
    const auto ft = population_table(sc, 1, 1, 1);
    const auto range = oracle_range(ft, 1e-3);
    bool any_violated = false;
    for (const auto& report : applicable_checks(ft, 1e-9)) {
      any_violated = any_violated || !report.satisfied;
    }
    CHECK(range.feasible == !any_violated);
    if (!range.feasible) ++infeasible_seen;
  }
  CHECK(infeasible_seen > 0);
}

TEST_CASE("interval coverage at a relaxed level and for a point-identified scenario") {
  SUBCASE("alpha = 0.5 keeps at least half coverage") {
    Scenario sc = independent_scenario(2);
    CoverageSpec spec;
    spec.target_index = 0;
    spec.future = 1;
    spec.sample_size = 400;
    spec.replicates = 200;
    spec.alpha = 0.5;
    spec.bootstrap = 200;
    spec.seed = 31;
    const auto report = coverage_study(sc, spec);
    CHECK(report.failed == 0);
    // 3 Monte Carlo sigmas below the nominal floor.
    CHECK(report.coverage() >= 0.5 - 3.0 * report.mc_se());
  }
  SUBCASE("point identification behaves like a standard interval") {
    Scenario sc = independent_scenario(1);
    sc.missingness[0] = MissingnessKernel::uniform({0.6, 0.4, 0.0});  // no MNAR-type
    sc.mar_holds = true;
    CoverageSpec spec;
    spec.target_index = 0;
    spec.sample_size = 800;
    spec.replicates = 250;
    spec.alpha = 0.05;
    spec.bootstrap = 300;
    spec.seed = 32;
    const auto report = coverage_study(sc, spec);
    CHECK(report.failed == 0);
    CHECK(report.coverage() >= 0.95 - 3.0 * report.mc_se());
  }
  SUBCASE("a scenario without the declared assumption is refused") {
    CoverageSpec spec;
    CHECK_THROWS_AS(coverage_study(outcome_dependent_scenario(), spec), ConfigError);
  }
}

TEST_CASE("coverage study is independent of the thread count") {
  Scenario sc = independent_scenario(2);
  CoverageSpec spec;
  spec.future = 1;
  spec.sample_size = 250;
  spec.replicates = 60;
  spec.bootstrap = 120;
  spec.seed = 99;
  spec.threads = 1;
  const auto serial = coverage_study(sc, spec);
  spec.threads = 4;
  const auto parallel = coverage_study(sc, spec);
  CHECK(serial.covered == parallel.covered);
  CHECK(serial.failed == parallel.failed);
  CHECK(serial.mean_width == parallel.mean_width);
}

TEST_CASE("three-stratum pooled interval covers the mixed prevalence") {
  // Three subpopulations with different prevalences and missingness; the
  // pooled interval must cover the weighted prevalence.
  std::vector<Scenario> strata;
  for (double prev : {0.15, 0.3, 0.45}) {
    Scenario sc = independent_scenario(2);
    sc.initial_prevalence = prev;
    strata.push_back(sc);
  }
  const std::size_t per_stratum = 500;
  double true_pi = 0.0;
  for (const auto& sc : strata) true_pi += population_prevalence(sc, 0) / 3.0;

  std::mt19937_64 seed_rng(53);
  int covered = 0;
  const int reps = 120;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<StratumTerms> terms;
    for (std::size_t k = 0; k < strata.size(); ++k) {
      const Panel panel = generate(strata[k], per_stratum, seed_rng());
      const auto ip = classify(panel, strata[k].classification());
      terms.push_back({"s" + std::to_string(k),
                       bootstrap_terms(ip, {0, 0, 1}, 300, seed_rng()), 1.0 / 3.0});
    }
    const auto ci = ci_aggregate(terms, 0.05);
    if (ci.lower_end <= true_pi && true_pi <= ci.upper_end) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  CHECK(coverage >= 0.90);  // nominal 0.95 less Monte Carlo slack at 120 reps
}
