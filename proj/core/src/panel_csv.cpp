#include "mtbounds/panel_csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "mtbounds/errors.hpp"

namespace mtbounds {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

bool parse_int(const std::string& s, int& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

struct ErrorLog {
  std::vector<std::string> messages;
  void add(std::size_t line, const std::string& msg) {
    if (messages.size() < 50) {
      messages.push_back("line " + std::to_string(line) + ": " + msg);
    }
    ++count;
  }
  std::size_t count = 0;
  void throw_if_any(const std::string& what) const {
    if (count == 0) return;
    std::string joined = what + " (" + std::to_string(count) + " error(s)):";
    for (const auto& m : messages) joined += "\n  " + m;
    if (count > messages.size()) joined += "\n  ...";
    throw IngestError(joined);
  }
};

struct WideHeader {
  std::vector<std::string> covariates;
  std::vector<int> waves;
};

WideHeader parse_wide_header(const std::vector<std::string>& header) {
  if (header.empty() || header[0] != "unit_id") {
    throw IngestError("header must start with unit_id");
  }
  WideHeader out;
  std::size_t i = 1;
  while (i < header.size() && !header[i].starts_with("status_")) {
    out.covariates.push_back(header[i]);
    ++i;
  }
  if (i == header.size()) {
    throw IngestError("header has no status_<wave> columns");
  }
  while (i < header.size()) {
    if (i + 2 >= header.size()) {
      throw IngestError("incomplete wave column triplet at column " + std::to_string(i + 1));
    }
    const std::string label = header[i].substr(7);
    int wave = 0;
    if (!header[i].starts_with("status_") || !parse_int(label, wave)) {
      throw IngestError("expected status_<wave> column, got " + header[i]);
    }
    if (header[i + 1] != "outcome_" + label || header[i + 2] != "reason_" + label) {
      throw IngestError("wave " + label + " columns must be status_/outcome_/reason_" + label);
    }
    if (!out.waves.empty() && wave <= out.waves.back()) {
      throw IngestError("wave labels must be strictly increasing in the header");
    }
    out.waves.push_back(wave);
    i += 3;
  }
  return out;
}

// Shared by wide ingestion and the long-format converter.
bool parse_cell(const std::string& status, const std::string& outcome, const std::string& reason,
                CellStatus& out, std::string& error) {
  if (status == "dead") {
    if (!outcome.empty() || !reason.empty()) {
      error = "dead cell must carry no outcome or reason";
      return false;
    }
    out = DeadCell{};
    return true;
  }
  if (status != "alive") {
    error = "status must be alive or dead, got '" + status + "'";
    return false;
  }
  if (!outcome.empty() && !reason.empty()) {
    error = "alive cell carries both an outcome and a reason";
    return false;
  }
  if (!outcome.empty()) {
    if (outcome != "0" && outcome != "1") {
      error = "outcome must be 0 or 1, got '" + outcome + "'";
      return false;
    }
    out = ObservedCell{outcome == "1" ? 1 : 0};
    return true;
  }
  if (reason.empty()) {
    error = "alive cell needs an outcome or a missing reason";
    return false;
  }
  out = MissingCell{reason};
  return true;
}

}  // namespace

Panel read_panel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty file");
  const WideHeader header = parse_wide_header(split_csv_line(line));
  const std::size_t expected = 1 + header.covariates.size() + 3 * header.waves.size();

  Panel panel;
  panel.waves = header.waves;
  panel.covariate_names = header.covariates;

  ErrorLog errors;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != expected) {
      errors.add(line_no, "expected " + std::to_string(expected) + " fields, got " +
                              std::to_string(fields.size()));
      continue;
    }
    UnitRecord unit;
    unit.id = fields[0];
    if (unit.id.empty()) {
      errors.add(line_no, "empty unit_id");
      continue;
    }
    if (!seen_ids.insert(unit.id).second) {
      errors.add(line_no, "duplicate unit_id " + unit.id);
      continue;
    }
    bool row_ok = true;
    for (std::size_t c = 0; c < header.covariates.size(); ++c) {
      const auto& value = fields[1 + c];
      if (value.empty()) {
        errors.add(line_no, "empty value for covariate " + header.covariates[c]);
        row_ok = false;
        break;
      }
      unit.strata[header.covariates[c]] = value;
    }
    if (!row_ok) continue;
    const std::size_t base = 1 + header.covariates.size();
    for (std::size_t w = 0; w < header.waves.size(); ++w) {
      CellStatus cell;
      std::string error;
      if (!parse_cell(fields[base + 3 * w], fields[base + 3 * w + 1], fields[base + 3 * w + 2],
                      cell, error)) {
        errors.add(line_no, "wave " + std::to_string(header.waves[w]) + ": " + error);
        row_ok = false;
        break;
      }
      if (is_missing(cell)) {
        panel.reason_vocabulary.insert(std::get<MissingCell>(cell).reason);
      }
      unit.cells.push_back(std::move(cell));
    }
    if (row_ok) panel.units.push_back(std::move(unit));
  }
  errors.throw_if_any("panel CSV rejected");
  check_panel_wellformed(panel);
  return panel;
}

Panel read_panel_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  return read_panel_csv(in);
}

void write_panel_csv(const Panel& panel, std::ostream& out) {
  out << "unit_id";
  for (const auto& c : panel.covariate_names) out << ',' << csv_escape(c);
  for (int w : panel.waves) {
    out << ",status_" << w << ",outcome_" << w << ",reason_" << w;
  }
  out << '\n';
  for (const auto& unit : panel.units) {
    out << csv_escape(unit.id);
    for (const auto& c : panel.covariate_names) out << ',' << csv_escape(unit.strata.at(c));
    for (const auto& cell : unit.cells) {
      if (is_dead(cell)) {
        out << ",dead,,";
      } else if (is_observed(cell)) {
        out << ",alive," << std::get<ObservedCell>(cell).outcome << ',';
      } else {
        out << ",alive,," << csv_escape(std::get<MissingCell>(cell).reason);
      }
    }
    out << '\n';
  }
}

void write_panel_csv_file(const Panel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot open " + path + " for writing");
  write_panel_csv(panel, out);
}

void convert_long_to_wide(std::istream& in, std::ostream& out) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty file");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "unit_id") {
    throw IngestError("long header must start with unit_id");
  }
  // Covariates sit between unit_id and the fixed tail columns.
  if (header.size() < 5 || header[header.size() - 4] != "wave" ||
      header[header.size() - 3] != "status" || header[header.size() - 2] != "outcome" ||
      header[header.size() - 1] != "reason") {
    throw IngestError("long header must end with wave,status,outcome,reason");
  }
  const std::vector<std::string> covariates(header.begin() + 1, header.end() - 4);

  struct LongUnit {
    std::vector<std::string> covariate_values;
    std::map<int, std::array<std::string, 3>> cells;  // wave -> status, outcome, reason
  };
  std::map<std::string, LongUnit> units;  // insertion order not kept; ids sorted
  std::vector<std::string> order;
  std::set<int> waves;

  ErrorLog errors;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      errors.add(line_no, "wrong field count");
      continue;
    }
    const std::string& id = fields[0];
    int wave = 0;
    if (!parse_int(fields[fields.size() - 4], wave)) {
      errors.add(line_no, "wave must be an integer");
      continue;
    }
    auto [it, inserted] = units.try_emplace(id);
    if (inserted) {
      order.push_back(id);
      it->second.covariate_values.assign(fields.begin() + 1, fields.end() - 4);
    }
    if (!it->second.cells
             .emplace(wave, std::array<std::string, 3>{fields[fields.size() - 3],
                                                       fields[fields.size() - 2],
                                                       fields[fields.size() - 1]})
             .second) {
      errors.add(line_no, "duplicate wave " + std::to_string(wave) + " for unit " + id);
      continue;
    }
    waves.insert(wave);
  }
  for (const auto& id : order) {
    if (units[id].cells.size() != waves.size()) {
      errors.add(0, "unit " + id + " misses rows for some waves");
    }
  }
  errors.throw_if_any("long CSV rejected");

  out << "unit_id";
  for (const auto& c : covariates) out << ',' << csv_escape(c);
  for (int w : waves) out << ",status_" << w << ",outcome_" << w << ",reason_" << w;
  out << '\n';
  for (const auto& id : order) {
    const auto& u = units[id];
    out << csv_escape(id);
    for (const auto& v : u.covariate_values) out << ',' << csv_escape(v);
    for (int w : waves) {
      const auto& cell = u.cells.at(w);
      out << ',' << csv_escape(cell[0]) << ',' << csv_escape(cell[1]) << ','
          << csv_escape(cell[2]);
    }
    out << '\n';
  }
}

std::vector<WaveSummary> summarize(const Panel& panel) {
  std::vector<WaveSummary> out;
  const auto total = static_cast<double>(panel.units.size());
  for (std::size_t w = 0; w < panel.waves.size(); ++w) {
    WaveSummary s;
    s.wave = panel.waves[w];
    for (const auto& unit : panel.units) {
      const auto& cell = unit.cells[w];
      if (is_dead(cell)) ++s.dead;
      else if (is_observed(cell)) { ++s.alive; ++s.observed; }
      else { ++s.alive; ++s.missing; }
    }
    s.missing_share_total = total > 0 ? s.missing / total : 0.0;
    s.missing_share_alive = s.alive > 0 ? static_cast<double>(s.missing) / s.alive : 0.0;
    out.push_back(s);
  }
  return out;
}

std::set<std::string> read_unit_id_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ids.insert(line);
  }
  return ids;
}

}  // namespace mtbounds
