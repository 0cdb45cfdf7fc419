#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mtbounds/errors.hpp"
#include "mtbounds/panel.hpp"
#include "mtbounds/simlab.hpp"

using namespace mtbounds;
using namespace mtb_test;

TEST_CASE("validate flags an observed outcome reversal") {
  Panel p;
  p.waves = {2004, 2006};
  add_units(p, 1, {obs(1), obs(0)});
  const auto report = validate(p);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == Violation::Kind::OutcomeNotMonotone);
  CHECK(report.violations[0].wave_a == 2004);
  CHECK(report.violations[0].wave_b == 2006);
}

TEST_CASE("validate flags a resurrection") {
  Panel p;
  p.waves = {2004, 2006, 2008};
  add_units(p, 1, {obs(0), dead(), obs(0)});
  const auto report = validate(p);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].kind == Violation::Kind::DeathNotAbsorbing);
  CHECK(report.violations[0].wave_a == 2006);
  CHECK(report.violations[0].wave_b == 2008);
}

TEST_CASE("validate accepts a monotone all-observed panel") {
  Panel p;
  p.waves = {2004, 2006};
  add_units(p, 3, {obs(0), obs(1)});
  add_units(p, 2, {obs(1), obs(1)});
  add_units(p, 4, {obs(0), obs(0)});
  CHECK(validate(p).ok());
}

TEST_CASE("validate is empty on generated panels and implies pairwise monotonicity") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto sc = random_valid_scenario(rng, 3);
    const Panel p = generate(sc, 400, 1000 + rep);
    const auto report = validate(p);
    CHECK(report.ok());
    for (const auto& unit : p.units) {
      for (std::size_t a = 0; a < unit.cells.size(); ++a) {
        for (std::size_t b = a + 1; b < unit.cells.size(); ++b) {
          if (is_observed(unit.cells[a]) && is_observed(unit.cells[b])) {
            CHECK(std::get<ObservedCell>(unit.cells[a]).outcome <=
                  std::get<ObservedCell>(unit.cells[b]).outcome);
          }
        }
      }
    }
  }
}

TEST_CASE("classify maps reasons through the MAR set") {
  Panel p;
  p.waves = {2004};
  add_units(p, 1, {miss("refused")});
  add_units(p, 1, {miss("moved")});
  add_units(p, 1, {obs(1)});
  p.reason_vocabulary.insert({"temporarily absent", "results lost", "not known"});

  Classification cls;
  cls.mar_reasons = {"moved", "temporarily absent", "results lost", "not known"};
  const auto ip = classify(p, cls);
  CHECK(ip.units[0].cells[0].r == MissingIndicator::MnarR);  // refused stays MNAR-type
  CHECK(ip.units[1].cells[0].r == MissingIndicator::MarR);
  CHECK(ip.units[2].cells[0].r == MissingIndicator::ObservedR);
  CHECK(ip.units[2].cells[0].outcome == 1);
}

TEST_CASE("classify with an empty MAR set sends every missing cell to MNAR-type") {
  Panel p;
  p.waves = {2004};
  add_units(p, 1, {miss("refused")});
  add_units(p, 1, {miss("moved")});
  const auto ip = classify(p, Classification{});
  CHECK(ip.units[0].cells[0].r == MissingIndicator::MnarR);
  CHECK(ip.units[1].cells[0].r == MissingIndicator::MnarR);
}

TEST_CASE("classify rejects unknown reason labels in the configuration") {
  Panel p;
  p.waves = {2004};
  add_units(p, 1, {miss("moved")});
  Classification cls;
  cls.mar_reasons = {"hospitalised"};
  CHECK_THROWS_AS(classify(p, cls), ConfigError);
}

TEST_CASE("classify marks dead cells and recoding only touches cells bearing the reason") {
  std::mt19937_64 rng(21);
  auto sc = random_valid_scenario(rng, 3, true);
  sc.mnar_reason_labels = {"refused", "hospitalized"};
  const Panel p = generate(sc, 500, 99);

  Classification before;
  before.mar_reasons = {"moved"};
  Classification after = before;
  after.mar_reasons.insert("refused");

  const auto ip_before = classify(p, before);
  const auto ip_after = classify(p, after);
  for (std::size_t u = 0; u < p.units.size(); ++u) {
    for (std::size_t w = 0; w < p.waves.size(); ++w) {
      const auto& cell = p.units[u].cells[w];
      const auto rb = ip_before.units[u].cells[w].r;
      const auto ra = ip_after.units[u].cells[w].r;
      if (is_dead(cell)) {
        CHECK(rb == MissingIndicator::DeadR);
        CHECK(ra == MissingIndicator::DeadR);
      } else if (is_missing(cell) && std::get<MissingCell>(cell).reason == "refused") {
        CHECK(rb == MissingIndicator::MnarR);
        CHECK(ra == MissingIndicator::MarR);
      } else {
        CHECK(rb == ra);
      }
    }
  }
}

TEST_CASE("stratify with no covariates yields one stratum of weight 1") {
  const Panel p = independent_panel_1w();
  const auto strata = stratify(p, {});
  REQUIRE(strata.size() == 1);
  CHECK(strata[0].key == "all");
  CHECK(strata[0].weight() == 1.0);
  CHECK(strata[0].panel.units.size() == p.units.size());
}

TEST_CASE("stratify splits evenly on a balanced covariate") {
  Panel p;
  p.waves = {2004};
  p.covariate_names = {"gender"};
  add_units(p, 50, {obs(0)}, {{"gender", "female"}});
  add_units(p, 50, {obs(1)}, {{"gender", "male"}});
  const auto strata = stratify(p, {"gender"});
  REQUIRE(strata.size() == 2);
  CHECK(strata[0].weight() == 0.5);
  CHECK(strata[1].weight() == 0.5);
}

TEST_CASE("stratify weights sum to one over a survey-sized crossed design") {
  Panel p;
  p.waves = {2004};
  p.covariate_names = {"region", "gender"};
  std::mt19937_64 rng(5);
  const std::vector<std::string> regions{"north", "center", "south"};
  const std::vector<std::string> genders{"female", "male"};
  std::int64_t total = 0;
  for (const auto& r : regions) {
    for (const auto& g : genders) {
      const int count = 400 + static_cast<int>(rng() % 200);
      add_units(p, count, {obs(0)}, {{"region", r}, {"gender", g}});
      total += count;
    }
  }
  // Pad to the survey's size so the weights are survey-scale count ratios.
  add_units(p, static_cast<int>(4062 - total), {obs(0)},
            {{"region", "north"}, {"gender", "female"}});
  CHECK(p.units.size() == 4062);

  const auto strata = stratify(p, {"region", "gender"});
  CHECK(strata.size() == 6);
  double weight_sum = 0.0;
  std::int64_t count_sum = 0;
  for (const auto& s : strata) {
    weight_sum += s.weight();
    count_sum += s.count;
  }
  CHECK(count_sum == 4062);  // exact rational mass: counts partition the panel
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stratify rejects unknown covariates") {
  const Panel p = independent_panel_1w();
  CHECK_THROWS_AS(stratify(p, {"region"}), ConfigError);
}

TEST_CASE("drop_units removes exactly the listed ids") {
  Panel p;
  p.waves = {2004};
  add_units(p, 5, {obs(0)});
  const Panel q = drop_units(p, {"u2", "u4"});
  REQUIRE(q.units.size() == 3);
  CHECK(q.units[0].id == "u1");
  CHECK(q.units[1].id == "u3");
  CHECK(q.units[2].id == "u5");
}

TEST_CASE("check_panel_wellformed rejects ragged panels") {
  Panel p;
  p.waves = {2004, 2006};
  UnitRecord u;
  u.id = "u1";
  u.cells = {obs(0)};
  p.units.push_back(u);
  CHECK_THROWS_AS(check_panel_wellformed(p), std::invalid_argument);
}
