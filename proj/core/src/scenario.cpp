#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

#include "mtbounds/errors.hpp"
#include "mtbounds/simlab.hpp"
#include "mtbounds/stats.hpp"

namespace mtbounds {

namespace {

void check_row(const std::array<double, 3>& row, const std::string& where) {
  double s = 0.0;
  for (double p : row) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("missingness row out of [0,1] in " + where);
    }
    s += p;
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw ConfigError("missingness row does not sum to 1 in " + where);
  }
}

void check_hazards(const std::vector<double>& h, std::size_t expected, const std::string& what) {
  if (!h.empty() && h.size() != expected) {
    throw ConfigError(what + " must have one entry per wave transition");
  }
  for (double p : h) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(what + " out of [0,1]");
  }
}

}  // namespace

MissingnessKernel MissingnessKernel::uniform(const std::array<double, 3>& row) {
  MissingnessKernel k;
  for (auto& by_y : k.probs) {
    for (auto& by_prev : by_y) by_prev = row;
  }
  return k;
}

MissingnessKernel MissingnessKernel::by_outcome(const std::array<double, 3>& y0,
                                                const std::array<double, 3>& y1) {
  MissingnessKernel k;
  for (auto& by_prev : k.probs[0]) by_prev = y0;
  for (auto& by_prev : k.probs[1]) by_prev = y1;
  return k;
}

MissingnessKernel MissingnessKernel::by_previous(const std::array<double, 3>& initial,
                                                 const std::array<double, 3>& prev_observed,
                                                 const std::array<double, 3>& prev_mar,
                                                 const std::array<double, 3>& prev_mnar) {
  MissingnessKernel k;
  for (auto& by_y : k.probs) {
    by_y[kInitial] = initial;
    by_y[kPrevObserved] = prev_observed;
    by_y[kPrevMar] = prev_mar;
    by_y[kPrevMnar] = prev_mnar;
  }
  return k;
}

bool MissingnessKernel::outcome_free() const {
  for (int prev = 0; prev < 4; ++prev) {
    for (int r = 0; r < 3; ++r) {
      if (probs[0][prev][r] != probs[1][prev][r]) return false;
    }
  }
  return true;
}

void Scenario::check() const {
  if (waves.empty()) throw ConfigError("scenario needs at least one wave");
  for (std::size_t w = 1; w < waves.size(); ++w) {
    if (waves[w] <= waves[w - 1]) throw ConfigError("wave labels must be strictly increasing");
  }
  if (!(initial_prevalence >= 0.0 && initial_prevalence <= 1.0)) {
    throw ConfigError("initial_prevalence out of [0,1]");
  }
  const std::size_t transitions = waves.size() - 1;
  if (infection_hazard.size() != transitions) {
    throw ConfigError("infection_hazard must have one entry per wave transition");
  }
  for (double p : infection_hazard) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("infection_hazard out of [0,1]");
  }
  check_hazards(death_hazard_y0, transitions, "death_hazard_y0");
  check_hazards(death_hazard_y1, transitions, "death_hazard_y1");
  if (death_hazard_y0.empty() != death_hazard_y1.empty()) {
    throw ConfigError("death hazards must be given for both outcome states or neither");
  }
  if (missingness.size() != waves.size()) {
    throw ConfigError("missingness must have one kernel per wave");
  }
  for (std::size_t w = 0; w < missingness.size(); ++w) {
    for (int y = 0; y < 2; ++y) {
      for (int prev = 0; prev < 4; ++prev) {
        check_row(missingness[w].probs[y][prev],
                  "wave " + std::to_string(waves[w]) + " y=" + std::to_string(y));
      }
    }
  }
  if (mar_reason_labels.empty() || mnar_reason_labels.empty()) {
    throw ConfigError("reason label lists must be nonempty");
  }
}

Classification Scenario::classification() const {
  Classification cls;
  cls.mar_reasons.insert(mar_reason_labels.begin(), mar_reason_labels.end());
  return cls;
}

Panel generate(const Scenario& sc, std::size_t n, std::uint64_t seed) {
  sc.check();
  const std::size_t T = sc.wave_count();
  const bool deaths = !sc.death_hazard_y0.empty();

  Panel panel;
  panel.waves = sc.waves;
  panel.reason_vocabulary.insert(sc.mar_reason_labels.begin(), sc.mar_reason_labels.end());
  panel.reason_vocabulary.insert(sc.mnar_reason_labels.begin(), sc.mnar_reason_labels.end());
  panel.units.reserve(n);

  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto pick_label = [&](const std::vector<std::string>& labels) -> const std::string& {
    if (labels.size() == 1) return labels.front();
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    return labels[pick(rng)];
  };

  for (std::size_t i = 0; i < n; ++i) {
    UnitRecord unit;
    unit.id = "u" + std::to_string(i + 1);
    unit.cells.reserve(T);

    bool alive = true;
    int y = u01(rng) < sc.initial_prevalence ? 1 : 0;
    int prev = MissingnessKernel::kInitial;
    for (std::size_t w = 0; w < T; ++w) {
      if (w > 0) {
        if (alive && deaths) {
          const double hazard = y == 1 ? sc.death_hazard_y1[w - 1] : sc.death_hazard_y0[w - 1];
          if (u01(rng) < hazard) alive = false;
        }
        if (alive && y == 0 && u01(rng) < sc.infection_hazard[w - 1]) y = 1;
      }
      if (!alive) {
        unit.cells.emplace_back(DeadCell{});
        continue;
      }
      const auto& row = sc.missingness[w].probs[static_cast<std::size_t>(y)]
                                        [static_cast<std::size_t>(prev)];
      const double u = u01(rng);
      if (u < row[MissingnessKernel::kObserved]) {
        unit.cells.emplace_back(ObservedCell{y});
        prev = MissingnessKernel::kPrevObserved;
      } else if (u < row[MissingnessKernel::kObserved] + row[MissingnessKernel::kMar]) {
        unit.cells.emplace_back(MissingCell{pick_label(sc.mar_reason_labels)});
        prev = MissingnessKernel::kPrevMar;
      } else {
        unit.cells.emplace_back(MissingCell{pick_label(sc.mnar_reason_labels)});
        prev = MissingnessKernel::kPrevMnar;
      }
    }
    panel.units.push_back(std::move(unit));
  }
  return panel;
}

namespace {

// Complete trajectory of the chain: indicator per wave (1/0/-1, meaningless
// once dead), outcome per wave, and survival flags.
struct Path {
  std::vector<int> r;
  std::vector<int> y;
  std::vector<bool> alive;
};

void enumerate_paths(const Scenario& sc, const std::function<void(const Path&, double)>& visit) {
  const std::size_t T = sc.wave_count();
  const bool deaths = !sc.death_hazard_y0.empty();
  Path path;
  path.r.assign(T, 0);
  path.y.assign(T, 0);
  path.alive.assign(T, false);

  // Depth-first over (death, infection, indicator) branches with exact
  // probability products.
  std::function<void(std::size_t, bool, int, int, double)> step =
      [&](std::size_t w, bool alive, int y, int prev, double prob) {
        if (prob <= 0.0) return;
        if (w == T) {
          visit(path, prob);
          return;
        }
        if (!alive) {
          path.alive[w] = false;
          step(w + 1, false, y, prev, prob);
          return;
        }
        path.alive[w] = true;
        path.y[w] = y;
        const auto& row = sc.missingness[w].probs[static_cast<std::size_t>(y)]
                                          [static_cast<std::size_t>(prev)];
        const int draws[3] = {1, 0, -1};
        const int prevs[3] = {MissingnessKernel::kPrevObserved, MissingnessKernel::kPrevMar,
                              MissingnessKernel::kPrevMnar};
        for (int d = 0; d < 3; ++d) {
          const double p_draw = row[static_cast<std::size_t>(d)];
          if (p_draw <= 0.0) continue;
          path.r[w] = draws[d];
          const double p_here = prob * p_draw;
          if (w + 1 == T) {
            step(w + 1, alive, y, prevs[d], p_here);
            continue;
          }
          const double death =
              deaths ? (y == 1 ? sc.death_hazard_y1[w] : sc.death_hazard_y0[w]) : 0.0;
          if (death > 0.0) {
            path.alive[w + 1] = false;  // set by recursive call as well
            step(w + 1, false, y, prevs[d], p_here * death);
          }
          const double survive = 1.0 - death;
          if (survive <= 0.0) continue;
          if (y == 1) {
            step(w + 1, true, 1, prevs[d], p_here * survive);
          } else {
            const double infect = sc.infection_hazard[w];
            if (infect > 0.0) step(w + 1, true, 1, prevs[d], p_here * survive * infect);
            if (infect < 1.0) step(w + 1, true, 0, prevs[d], p_here * survive * (1.0 - infect));
          }
        }
      };

  const double p1 = sc.initial_prevalence;
  if (p1 > 0.0) step(0, true, 1, MissingnessKernel::kInitial, p1);
  if (p1 < 1.0) step(0, true, 0, MissingnessKernel::kInitial, 1.0 - p1);
}

}  // namespace

FrequencyTable population_table(const Scenario& sc, int target_index, int past, int future) {
  sc.check();
  const int T = static_cast<int>(sc.wave_count());
  if (target_index < 0 || target_index >= T || target_index - past < 0 ||
      target_index + future >= T) {
    throw std::invalid_argument("population_table: window outside the wave range");
  }
  FrequencyTable ft;
  ft.target_index = target_index;
  ft.target_wave_label = sc.waves[static_cast<std::size_t>(target_index)];
  ft.past_horizon = past;
  ft.future_horizon = future;
  ft.past_mnar_run.assign(static_cast<std::size_t>(past), 0.0);
  ft.past_mar_run.assign(static_cast<std::size_t>(past), 0.0);
  ft.future_mnar_run.assign(static_cast<std::size_t>(future), 0.0);
  ft.future_mar_run.assign(static_cast<std::size_t>(future), 0.0);

  const auto t = static_cast<std::size_t>(target_index);
  enumerate_paths(sc, [&](const Path& path, double prob) {
    if (!path.alive[t]) return;
    ft.survivors += prob;
    const int rt = path.r[t];
    if (rt == 1) {
      ft.observed += prob;
      if (path.y[t] == 1) ft.observed_positive += prob;
      return;
    }
    if (rt == 0) {
      ft.mar_missing += prob;
    } else {
      ft.mnar_missing += prob;
    }
    for (int i = 1; i <= past; ++i) {
      const auto w = t - static_cast<std::size_t>(i);
      if (path.r[w] == 1) {
        if (path.y[w] == 1) {
          auto& slot = rt == 0 ? ft.past_mar_run[static_cast<std::size_t>(i - 1)]
                               : ft.past_mnar_run[static_cast<std::size_t>(i - 1)];
          slot += prob;
        }
        break;
      }
    }
    for (int j = 1; j <= future; ++j) {
      const auto w = t + static_cast<std::size_t>(j);
      if (!path.alive[w]) break;
      if (path.r[w] == 1) {
        if (path.y[w] == 0) {
          auto& slot = rt == 0 ? ft.future_mar_run[static_cast<std::size_t>(j - 1)]
                               : ft.future_mnar_run[static_cast<std::size_t>(j - 1)];
          slot += prob;
        }
        break;
      }
    }
  });
  if (ft.survivors <= 0.0) {
    throw EstimationError("population_table: no survivors at the target wave");
  }
  return ft;
}

double population_prevalence(const Scenario& sc, int target_index) {
  sc.check();
  if (target_index < 0 || target_index >= static_cast<int>(sc.wave_count())) {
    throw std::invalid_argument("population_prevalence: target out of range");
  }
  const auto t = static_cast<std::size_t>(target_index);
  double alive_mass = 0.0, positive_mass = 0.0;
  enumerate_paths(sc, [&](const Path& path, double prob) {
    if (!path.alive[t]) return;
    alive_mass += prob;
    if (path.y[t] == 1) positive_mass += prob;
  });
  if (alive_mass <= 0.0) {
    throw EstimationError("population_prevalence: no survivors at the target wave");
  }
  return positive_mass / alive_mass;
}

}  // namespace mtbounds
