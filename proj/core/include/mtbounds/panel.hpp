#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace mtbounds {

// Longitudinal survey data model. A Panel holds one record per unit with one
// cell per wave; cells are either Dead, Observed(outcome) or Missing(reason).
// Panels are immutable after ingestion and safe to share across threads.

struct DeadCell {
  bool operator==(const DeadCell&) const = default;
};

struct ObservedCell {
  int outcome = 0;  // binary, 0 or 1
  bool operator==(const ObservedCell&) const = default;
};

struct MissingCell {
  std::string reason;  // raw category label from the survey
  bool operator==(const MissingCell&) const = default;
};

using CellStatus = std::variant<DeadCell, ObservedCell, MissingCell>;

inline bool is_dead(const CellStatus& c) { return std::holds_alternative<DeadCell>(c); }
inline bool is_observed(const CellStatus& c) { return std::holds_alternative<ObservedCell>(c); }
inline bool is_missing(const CellStatus& c) { return std::holds_alternative<MissingCell>(c); }

struct UnitRecord {
  std::string id;
  std::map<std::string, std::string> strata;  // covariate name -> discrete level
  std::vector<CellStatus> cells;              // one per wave, panel order
};

struct Panel {
  std::vector<int> waves;                     // strictly increasing labels, e.g. 2004 < 2006
  std::vector<std::string> covariate_names;   // shared strata keys, file order
  std::vector<UnitRecord> units;
  std::set<std::string> reason_vocabulary;    // labels seen in data plus config

  std::size_t wave_count() const { return waves.size(); }
  /// Position of a wave label; throws std::invalid_argument if absent.
  std::size_t wave_index(int label) const;
};

/// Structural sanity: >=1 wave, strictly increasing labels, one cell per wave,
/// identical strata keys across units. Throws std::invalid_argument.
void check_panel_wellformed(const Panel& panel);

// ---------------------------------------------------------------------------
// Validation: violations are data, not faults, so validate() never throws.

struct Violation {
  enum class Kind { DeathNotAbsorbing, OutcomeNotMonotone };
  Kind kind;
  std::string unit_id;
  int wave_a = 0;  // earlier wave label
  int wave_b = 0;  // later wave label
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  /// Units with at least one violation of the given kind.
  std::set<std::string> offending_units(Violation::Kind kind) const;
  std::set<std::string> offending_units() const;
};

/// Flags, per unit, every violated (earlier, later) wave pair:
/// death must be absorbing, and observed outcomes must be nondecreasing
/// across waves where the unit is alive.
ValidationReport validate(const Panel& panel);

/// Copy of the panel without the listed units.
Panel drop_units(const Panel& panel, const std::set<std::string>& ids);

// ---------------------------------------------------------------------------
// Missing-type classification.

/// Maps raw missing reasons to the MAR-type; every other reason is treated as
/// MNAR-type (conservative: preserves worst-case validity for unknown labels).
struct Classification {
  std::set<std::string> mar_reasons;
};

/// Four-valued per-cell indicator derived from a cell and a Classification.
enum class MissingIndicator : std::uint8_t {
  ObservedR,  // outcome observed
  MnarR,      // missing, reason possibly related to the outcome
  MarR,       // missing, reason classified as missing-at-random
  DeadR,      // unit dead at this wave
};

struct IndicatorCell {
  MissingIndicator r = MissingIndicator::DeadR;
  std::int8_t outcome = -1;  // 0/1 iff r == ObservedR, else -1
};

struct IndicatorUnit {
  std::vector<IndicatorCell> cells;  // one per wave
};

struct IndicatorPanel {
  std::vector<int> waves;
  std::vector<IndicatorUnit> units;
};

/// Deterministic and total on well-formed panels. Throws ConfigError if
/// cls.mar_reasons mentions a label outside panel.reason_vocabulary.
IndicatorPanel classify(const Panel& panel, const Classification& cls);

// ---------------------------------------------------------------------------
// Stratification by discrete covariates.

struct Stratum {
  std::string key;      // joined covariate levels, e.g. "north|female"
  Panel panel;
  std::int64_t count = 0;
  std::int64_t total = 0;
  double weight() const { return static_cast<double>(count) / static_cast<double>(total); }
};

/// Partition by the named covariates with weights = sample frequencies.
/// An empty covariate list yields a single stratum "all" with weight 1.
/// Strata are ordered by key; weights sum to 1 exactly as count ratios.
std::vector<Stratum> stratify(const Panel& panel, const std::vector<std::string>& covariates);

}  // namespace mtbounds
