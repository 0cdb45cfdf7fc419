#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mtbounds/panel.hpp"

namespace mtbounds {

// Wide CSV schema, one row per unit:
//   unit_id, <covariate columns...>,
//   then per wave: status_<label>, outcome_<label>, reason_<label>
// status is "alive" or "dead"; outcome is 0/1 or empty; reason is a category
// label or empty. An alive cell carries exactly one of outcome/reason; a dead
// cell carries neither. Header row mandatory, UTF-8.

/// Parses a wide panel CSV. Throws IngestError listing offending rows with
/// line numbers.
Panel read_panel_csv(std::istream& in);
Panel read_panel_csv_file(const std::string& path);

/// Writes the wide CSV for a panel; read_panel_csv(write_panel_csv(p)) == p.
void write_panel_csv(const Panel& panel, std::ostream& out);
void write_panel_csv_file(const Panel& panel, const std::string& path);

/// Long-to-wide converter. Long schema, one row per unit-wave:
///   unit_id, <covariate columns...>, wave, status, outcome, reason
void convert_long_to_wide(std::istream& in, std::ostream& out);

struct WaveSummary {
  int wave = 0;
  std::int64_t alive = 0;
  std::int64_t dead = 0;
  std::int64_t observed = 0;
  std::int64_t missing = 0;
  double missing_share_total = 0.0;  // missing / all units
  double missing_share_alive = 0.0;  // missing / alive units
};
std::vector<WaveSummary> summarize(const Panel& panel);

/// One unit id per line; '#' comments and blank lines ignored.
std::set<std::string> read_unit_id_list(const std::string& path);

}  // namespace mtbounds
