#pragma once

// Exact finite panels and scenario factories shared by the test suites. The
// multiplicities below realize small populations whose event probabilities
// are exact integer ratios, so bound values can be asserted to machine
// precision against hand-computed constants.

#include <cassert>
#include <random>
#include <string>
#include <vector>

#include "mtbounds/panel.hpp"
#include "mtbounds/simlab.hpp"

namespace mtb_test {

inline mtbounds::CellStatus obs(int y) { return mtbounds::ObservedCell{y}; }
inline mtbounds::CellStatus miss(const std::string& reason) {
  return mtbounds::MissingCell{reason};
}
inline mtbounds::CellStatus dead() { return mtbounds::DeadCell{}; }

inline void add_units(mtbounds::Panel& panel, int count,
                      const std::vector<mtbounds::CellStatus>& cells,
                      const std::map<std::string, std::string>& strata = {}) {
  for (int i = 0; i < count; ++i) {
    mtbounds::UnitRecord unit;
    unit.id = "u" + std::to_string(panel.units.size() + 1);
    unit.strata = strata;
    unit.cells = cells;
    panel.units.push_back(std::move(unit));
    if (panel.units.back().cells.size() != panel.waves.size()) assert(false);
  }
  for (const auto& cell : cells) {
    if (mtbounds::is_missing(cell)) {
      panel.reason_vocabulary.insert(std::get<mtbounds::MissingCell>(cell).reason);
    }
  }
}

inline mtbounds::Classification mar_moved() {
  return mtbounds::Classification{{"moved"}};
}

// Two-wave population with outcome-dependent missingness. Initial prevalence
// 2/5; indicator given outcome: y=1 -> (obs 3/4, mar 1/4, mnar 0),
// y=0 -> (obs 0, mar 1/2, mnar 1/2). Transition: infection hazard 1/6,
// next indicator depends on the previous one: obs -> (1/2, 1/2, 0),
// mar -> (1, 0, 0), mnar -> (1/2, 1/2, 0). All 240ths are integers, so 240
// units reproduce the population exactly. Known values at the first wave:
// worst-case [0.3, 1.0], sharpened [0.5, 1.0], first falsification check
// 0.5 > 0.375.
inline mtbounds::Panel outcome_dependent_panel() {
  mtbounds::Panel p;
  p.waves = {2004, 2006};
  add_units(p, 36, {obs(1), obs(1)});
  add_units(p, 36, {obs(1), miss("moved")});
  add_units(p, 36, {miss("moved"), obs(1)});
  add_units(p, 60, {miss("moved"), obs(0)});
  add_units(p, 6, {miss("refused"), obs(1)});
  add_units(p, 36, {miss("refused"), miss("moved")});
  add_units(p, 30, {miss("refused"), obs(0)});
  return p;  // 240 units
}

inline mtbounds::Scenario outcome_dependent_scenario() {
  using K = mtbounds::MissingnessKernel;
  mtbounds::Scenario sc;
  sc.waves = {2004, 2006};
  sc.initial_prevalence = 2.0 / 5.0;
  sc.infection_hazard = {1.0 / 6.0};
  sc.missingness.push_back(K::by_outcome({0.0, 0.5, 0.5}, {0.75, 0.25, 0.0}));
  sc.missingness.push_back(K::by_previous({1.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {1.0, 0.0, 0.0},
                                          {0.5, 0.5, 0.0}));
  sc.mar_holds = false;
  return sc;
}

// Three-wave version of the outcome-dependent scenario with an uninformative
// extra first wave (everything MAR-type missing, no infection into the second
// wave). At the middle wave the one-future-wave check still fails: 0.5 > 0.375.
inline mtbounds::Scenario padded_outcome_dependent_scenario() {
  using K = mtbounds::MissingnessKernel;
  mtbounds::Scenario sc = outcome_dependent_scenario();
  sc.waves = {2002, 2004, 2006};
  sc.infection_hazard.insert(sc.infection_hazard.begin(), 0.0);
  sc.missingness.insert(sc.missingness.begin(), K::uniform({0.0, 1.0, 0.0}));
  return sc;
}

// Missingness independent of everything: P(Y=1) = 0.3 and per-wave indicator
// distributions (obs, mar, mnar) as given. The outcome never changes across
// waves. Exact sharpened bounds at a single wave with (0.6, 0.3, 0.1):
// [18/70, 28/70].
inline mtbounds::Panel independent_panel_1w() {
  mtbounds::Panel p;
  p.waves = {2004};
  add_units(p, 180, {obs(1)});
  add_units(p, 420, {obs(0)});
  add_units(p, 300, {miss("moved")});
  add_units(p, 100, {miss("refused")});
  return p;  // 1000 units
}

// Two waves: wave-1 indicator (0.6, 0.3, 0.1), wave-2 indicator (0.5, 0.5, 0),
// outcome static. 2000 units.
inline mtbounds::Panel independent_panel_2w() {
  mtbounds::Panel p;
  p.waves = {2004, 2006};
  add_units(p, 180, {obs(1), obs(1)});
  add_units(p, 180, {obs(1), miss("moved")});
  add_units(p, 90, {miss("moved"), obs(1)});
  add_units(p, 90, {miss("moved"), miss("moved")});
  add_units(p, 30, {miss("refused"), obs(1)});
  add_units(p, 30, {miss("refused"), miss("moved")});
  add_units(p, 420, {obs(0), obs(0)});
  add_units(p, 420, {obs(0), miss("moved")});
  add_units(p, 210, {miss("moved"), obs(0)});
  add_units(p, 210, {miss("moved"), miss("moved")});
  add_units(p, 70, {miss("refused"), obs(0)});
  add_units(p, 70, {miss("refused"), miss("moved")});
  return p;  // 2000 units
}

// Three waves: indicators (0.6,0.3,0.1), (0.6,0.3,0.1), (0.5,0.5,0); outcome
// static at P(Y=1)=0.3. 2000 units, all cell masses integral.
inline mtbounds::Panel independent_panel_3w() {
  mtbounds::Panel p;
  p.waves = {2004, 2006, 2008};
  const int y_num[2] = {7, 3};          // P(y)*10, y=0 then y=1
  const int r_num[3] = {6, 3, 1};       // wave 1 and 2: probs * 10
  const int r2_num[3] = {5, 5, 0};      // wave 3: probs * 10
  auto cell_for = [&](int r, int y) -> mtbounds::CellStatus {
    if (r == 0) return obs(y);
    if (r == 1) return miss("moved");
    return miss("refused");
  };
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          const long long numer = 2000LL * y_num[y] * r_num[a] * r_num[b] * r2_num[c];
          assert(numer % 10000 == 0);
          const int count = static_cast<int>(numer / 10000);
          if (count == 0) continue;
          add_units(p, count, {cell_for(a, y), cell_for(b, y), cell_for(c, y)});
        }
      }
    }
  }
  return p;  // 2000 units
}

inline mtbounds::Scenario independent_scenario(int wave_count) {
  using K = mtbounds::MissingnessKernel;
  mtbounds::Scenario sc;
  for (int w = 0; w < wave_count; ++w) sc.waves.push_back(2004 + 2 * w);
  sc.initial_prevalence = 0.3;
  sc.infection_hazard.assign(static_cast<std::size_t>(wave_count - 1), 0.0);
  for (int w = 0; w < wave_count; ++w) {
    const bool last = w == wave_count - 1 && wave_count > 1;
    sc.missingness.push_back(last ? K::uniform({0.5, 0.5, 0.0})
                                  : K::uniform({0.6, 0.3, 0.1}));
  }
  sc.mar_holds = true;
  return sc;
}

// Panel with past-wave observed positives concentrated in the MAR-type
// group, crossing the bounds: the three-wave checks and the oracle must both
// reject it.
inline mtbounds::Panel crossing_panel_2w() {
  mtbounds::Panel p;
  p.waves = {2004, 2006};
  add_units(p, 100, {obs(1), miss("moved")});
  add_units(p, 100, {obs(0), miss("moved")});
  add_units(p, 20, {obs(0), miss("refused")});
  add_units(p, 300, {obs(0), obs(1)});
  add_units(p, 480, {obs(0), obs(0)});
  return p;  // 1000 units
}

// Random scenario satisfying both identifying assumptions by construction:
// the missingness kernels never depend on the current outcome, so the
// missing process is independent of the outcome/survival process.
inline mtbounds::Scenario random_valid_scenario(std::mt19937_64& rng, int wave_count,
                                                bool allow_deaths = true) {
  using K = mtbounds::MissingnessKernel;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto random_row = [&]() {
    std::array<double, 3> raw{0.1 + u01(rng), 0.1 + u01(rng), 0.1 + u01(rng)};
    const double total = raw[0] + raw[1] + raw[2];
    return std::array<double, 3>{raw[0] / total, raw[1] / total, raw[2] / total};
  };
  mtbounds::Scenario sc;
  for (int w = 0; w < wave_count; ++w) sc.waves.push_back(2000 + w);
  sc.initial_prevalence = 0.1 + 0.6 * u01(rng);
  for (int w = 0; w + 1 < wave_count; ++w) {
    sc.infection_hazard.push_back(0.05 + 0.35 * u01(rng));
  }
  if (allow_deaths && u01(rng) < 0.5) {
    for (int w = 0; w + 1 < wave_count; ++w) {
      sc.death_hazard_y0.push_back(0.15 * u01(rng));
      sc.death_hazard_y1.push_back(0.30 * u01(rng));
    }
  }
  for (int w = 0; w < wave_count; ++w) {
    if (u01(rng) < 0.5) {
      sc.missingness.push_back(K::uniform(random_row()));
    } else {
      sc.missingness.push_back(
          K::by_previous(random_row(), random_row(), random_row(), random_row()));
    }
  }
  sc.mar_holds = true;
  return sc;
}

// Random scenario whose missingness depends on the current outcome, so the
// MAR-type assumption generally fails (useful for falsification tests).
inline mtbounds::Scenario random_violating_scenario(std::mt19937_64& rng, int wave_count) {
  using K = mtbounds::MissingnessKernel;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto random_row = [&]() {
    std::array<double, 3> raw{0.05 + u01(rng), 0.05 + u01(rng), 0.05 + u01(rng)};
    const double total = raw[0] + raw[1] + raw[2];
    return std::array<double, 3>{raw[0] / total, raw[1] / total, raw[2] / total};
  };
  mtbounds::Scenario sc;
  for (int w = 0; w < wave_count; ++w) sc.waves.push_back(2000 + w);
  sc.initial_prevalence = 0.1 + 0.6 * u01(rng);
  for (int w = 0; w + 1 < wave_count; ++w) {
    sc.infection_hazard.push_back(0.05 + 0.35 * u01(rng));
  }
  for (int w = 0; w < wave_count; ++w) {
    sc.missingness.push_back(K::by_outcome(random_row(), random_row()));
  }
  sc.mar_holds = false;
  return sc;
}

}  // namespace mtb_test
