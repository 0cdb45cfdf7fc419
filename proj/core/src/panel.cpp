#include "mtbounds/panel.hpp"

#include <algorithm>
#include <stdexcept>

#include "mtbounds/errors.hpp"

namespace mtbounds {

std::size_t Panel::wave_index(int label) const {
  const auto it = std::find(waves.begin(), waves.end(), label);
  if (it == waves.end()) {
    throw std::invalid_argument("unknown wave label: " + std::to_string(label));
  }
  return static_cast<std::size_t>(it - waves.begin());
}

void check_panel_wellformed(const Panel& panel) {
  if (panel.waves.empty()) {
    throw std::invalid_argument("panel needs at least one wave");
  }
  for (std::size_t w = 1; w < panel.waves.size(); ++w) {
    if (panel.waves[w] <= panel.waves[w - 1]) {
      throw std::invalid_argument("wave labels must be strictly increasing");
    }
  }
  for (const auto& unit : panel.units) {
    if (unit.cells.size() != panel.waves.size()) {
      throw std::invalid_argument("unit " + unit.id + " does not have one cell per wave");
    }
    if (unit.strata.size() != panel.covariate_names.size()) {
      throw std::invalid_argument("unit " + unit.id + " has unexpected strata keys");
    }
    for (const auto& name : panel.covariate_names) {
      if (!unit.strata.contains(name)) {
        throw std::invalid_argument("unit " + unit.id + " misses covariate " + name);
      }
    }
  }
}

ValidationReport validate(const Panel& panel) {
  ValidationReport report;
  for (const auto& unit : panel.units) {
    const auto& cells = unit.cells;
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        if (is_dead(cells[a]) && !is_dead(cells[b])) {
          report.violations.push_back({Violation::Kind::DeathNotAbsorbing, unit.id,
                                       panel.waves[a], panel.waves[b]});
        }
        if (is_observed(cells[a]) && is_observed(cells[b])) {
          const int ya = std::get<ObservedCell>(cells[a]).outcome;
          const int yb = std::get<ObservedCell>(cells[b]).outcome;
          if (ya > yb) {
            report.violations.push_back({Violation::Kind::OutcomeNotMonotone, unit.id,
                                         panel.waves[a], panel.waves[b]});
          }
        }
      }
    }
  }
  return report;
}

std::set<std::string> ValidationReport::offending_units(Violation::Kind kind) const {
  std::set<std::string> ids;
  for (const auto& v : violations) {
    if (v.kind == kind) ids.insert(v.unit_id);
  }
  return ids;
}

std::set<std::string> ValidationReport::offending_units() const {
  std::set<std::string> ids;
  for (const auto& v : violations) ids.insert(v.unit_id);
  return ids;
}

Panel drop_units(const Panel& panel, const std::set<std::string>& ids) {
  Panel out;
  out.waves = panel.waves;
  out.covariate_names = panel.covariate_names;
  out.reason_vocabulary = panel.reason_vocabulary;
  out.units.reserve(panel.units.size());
  for (const auto& unit : panel.units) {
    if (!ids.contains(unit.id)) out.units.push_back(unit);
  }
  return out;
}

IndicatorPanel classify(const Panel& panel, const Classification& cls) {
  for (const auto& reason : cls.mar_reasons) {
    if (!panel.reason_vocabulary.contains(reason)) {
      throw ConfigError("classification names unknown reason label: " + reason);
    }
  }
  IndicatorPanel out;
  out.waves = panel.waves;
  out.units.reserve(panel.units.size());
  for (const auto& unit : panel.units) {
    IndicatorUnit iu;
    iu.cells.reserve(unit.cells.size());
    for (const auto& cell : unit.cells) {
      IndicatorCell ic;
      if (is_dead(cell)) {
        ic.r = MissingIndicator::DeadR;
      } else if (is_observed(cell)) {
        ic.r = MissingIndicator::ObservedR;
        ic.outcome = static_cast<std::int8_t>(std::get<ObservedCell>(cell).outcome);
      } else {
        const auto& reason = std::get<MissingCell>(cell).reason;
        ic.r = cls.mar_reasons.contains(reason) ? MissingIndicator::MarR
                                                : MissingIndicator::MnarR;
      }
      iu.cells.push_back(ic);
    }
    out.units.push_back(std::move(iu));
  }
  return out;
}

std::vector<Stratum> stratify(const Panel& panel, const std::vector<std::string>& covariates) {
  for (const auto& name : covariates) {
    if (std::find(panel.covariate_names.begin(), panel.covariate_names.end(), name) ==
        panel.covariate_names.end()) {
      throw ConfigError("unknown covariate: " + name);
    }
  }
  const auto total = static_cast<std::int64_t>(panel.units.size());
  if (covariates.empty()) {
    Stratum all{"all", panel, total, total};
    return {std::move(all)};
  }
  std::map<std::string, Stratum> strata;
  for (const auto& unit : panel.units) {
    std::string key;
    for (const auto& name : covariates) {
      if (!key.empty()) key += '|';
      key += unit.strata.at(name);
    }
    auto [it, inserted] = strata.try_emplace(key);
    if (inserted) {
      it->second.key = key;
      it->second.panel.waves = panel.waves;
      it->second.panel.covariate_names = panel.covariate_names;
      it->second.panel.reason_vocabulary = panel.reason_vocabulary;
      it->second.total = total;
    }
    it->second.panel.units.push_back(unit);
    ++it->second.count;
  }
  std::vector<Stratum> out;
  out.reserve(strata.size());
  for (auto& [key, s] : strata) out.push_back(std::move(s));
  return out;
}

}  // namespace mtbounds
