#include "riskgate/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace riskgate {

namespace {

std::string column_name(std::size_t m, std::size_t col) {
  if (col < m) return "s" + std::to_string(col + 1);
  if (col < 2 * m) return "v" + std::to_string(col - m + 1);
  return "v_obj";
}

double parse_field(const std::string& field, std::size_t row, const std::string& col) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("malformed number in row " + std::to_string(row) +
                     ", column " + col + ": '" + field + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string format17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CalibrationSet load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.size() % 2 == 0) {
    throw ParseError(path + ": header must be s1..sm,v1..vm,v_obj");
  }
  const std::size_t m = (header.size() - 1) / 2;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != column_name(m, c)) {
      throw ParseError(path + ": unexpected header column '" + header[c] +
                       "', expected '" + column_name(m, c) + "'");
    }
  }

  CalibrationSet data;
  data.m = m;
  data.scores.resize(m);
  data.costs.resize(m);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(path + ": row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_field(fields[c], row, column_name(m, c));
      if (c < m) {
        data.scores[c].push_back(v);
      } else if (c < 2 * m) {
        data.costs[c - m].push_back(v);
      } else {
        data.objective_costs.push_back(v);
      }
    }
  }
  if (row == 0) throw ParseError(path + ": no data rows");
  data.n = row;
  return data;
}

CalibrationSet load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("m") || !doc.contains("rows")) {
    throw ParseError(path + ": expected object with fields 'm' and 'rows'");
  }
  const std::size_t m = doc["m"].get<std::size_t>();
  if (m < 1) throw ValidationError(path + ": m must be >= 1");

  CalibrationSet data;
  data.m = m;
  data.scores.resize(m);
  data.costs.resize(m);
  std::size_t row = 0;
  for (const auto& r : doc["rows"]) {
    ++row;
    if (!r.contains("s") || !r.contains("v") || !r.contains("v_obj") ||
        r["s"].size() != m || r["v"].size() != m) {
      throw ParseError(path + ": row " + std::to_string(row) +
                       " must have 's'[m], 'v'[m] and 'v_obj'");
    }
    for (std::size_t j = 0; j < m; ++j) {
      data.scores[j].push_back(r["s"][j].get<double>());
      data.costs[j].push_back(r["v"][j].get<double>());
    }
    data.objective_costs.push_back(r["v_obj"].get<double>());
  }
  if (row == 0) throw ParseError(path + ": no data rows");
  data.n = row;
  return data;
}

}  // namespace

void CalibrationSet::validate(bool allow_negative_costs) const {
  if (n < 1) throw ValidationError("dataset requires n >= 1");
  if (m < 1) throw ValidationError("dataset requires m >= 1");
  if (scores.size() != m || costs.size() != m || objective_costs.size() != n) {
    throw ValidationError("dataset has inconsistent dimensions");
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (scores[j].size() != n || costs[j].size() != n) {
      throw ValidationError("dataset column " + std::to_string(j + 1) +
                            " has inconsistent length");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(scores[j][i])) {
        throw ValidationError("non-finite score in row " + std::to_string(i + 1) +
                              ", column s" + std::to_string(j + 1));
      }
      if (!std::isfinite(costs[j][i])) {
        throw ValidationError("non-finite cost in row " + std::to_string(i + 1) +
                              ", column v" + std::to_string(j + 1));
      }
      if (!allow_negative_costs && costs[j][i] < 0.0) {
        throw ValidationError(
            "negative cost in row " + std::to_string(i + 1) + ", column v" +
            std::to_string(j + 1) +
            "; shift raw costs first (compute_cost_shifts/apply_shifts, or the"
            " --shift-costs flag)");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(objective_costs[i])) {
      throw ValidationError("non-finite cost in row " + std::to_string(i + 1) +
                            ", column v_obj");
    }
    if (!allow_negative_costs && objective_costs[i] < 0.0) {
      throw ValidationError(
          "negative cost in row " + std::to_string(i + 1) +
          ", column v_obj; shift raw costs first (compute_cost_shifts/"
          "apply_shifts, or the --shift-costs flag)");
    }
  }
}

CalibrationSet load_dataset(const std::string& path, DataFormat format,
                            bool allow_negative_costs) {
  CalibrationSet data =
      format == DataFormat::csv ? load_csv(path) : load_json(path);
  data.validate(allow_negative_costs);
  return data;
}

void save_dataset(const CalibrationSet& data, const std::string& path,
                  DataFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (format == DataFormat::csv) {
    for (std::size_t j = 0; j < data.m; ++j) out << "s" << (j + 1) << ",";
    for (std::size_t j = 0; j < data.m; ++j) out << "v" << (j + 1) << ",";
    out << "v_obj\n";
    for (std::size_t i = 0; i < data.n; ++i) {
      for (std::size_t j = 0; j < data.m; ++j) out << format17(data.scores[j][i]) << ",";
      for (std::size_t j = 0; j < data.m; ++j) out << format17(data.costs[j][i]) << ",";
      out << format17(data.objective_costs[i]) << "\n";
    }
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < data.n; ++i) {
      nlohmann::json r;
      for (std::size_t j = 0; j < data.m; ++j) {
        r["s"].push_back(data.scores[j][i]);
        r["v"].push_back(data.costs[j][i]);
      }
      r["v_obj"] = data.objective_costs[i];
      rows.push_back(std::move(r));
    }
    nlohmann::json doc{{"m", data.m}, {"rows", std::move(rows)}};
    out << doc.dump(2) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

CostShifts compute_cost_shifts(const CalibrationSet& raw) {
  if (raw.n < 1) throw ValidationError("compute_cost_shifts requires n >= 1");
  CostShifts shifts;
  shifts.shifts.reserve(raw.m + 1);
  for (std::size_t j = 0; j < raw.m; ++j) {
    shifts.shifts.push_back(*std::min_element(raw.costs[j].begin(), raw.costs[j].end()));
  }
  shifts.shifts.push_back(
      *std::min_element(raw.objective_costs.begin(), raw.objective_costs.end()));
  return shifts;
}

CalibrationSet apply_shifts(const CalibrationSet& raw, const CostShifts& shifts) {
  if (shifts.shifts.size() != raw.m + 1) {
    throw ValidationError("apply_shifts: expected " + std::to_string(raw.m + 1) +
                          " shifts, got " + std::to_string(shifts.shifts.size()));
  }
  CalibrationSet out = raw;
  for (std::size_t j = 0; j < raw.m; ++j) {
    for (double& v : out.costs[j]) v = std::max(v - shifts.shifts[j], 0.0);
  }
  for (double& v : out.objective_costs) v = std::max(v - shifts.shifts[raw.m], 0.0);
  return out;
}

CostBounds estimate_cost_bounds(const CalibrationSet& calib) {
  if (calib.n < 1) throw ValidationError("estimate_cost_bounds requires n >= 1");
  CostBounds bounds;
  bounds.v_min.assign(calib.m, 0.0);
  bounds.v_max.reserve(calib.m);
  for (std::size_t j = 0; j < calib.m; ++j) {
    bounds.v_max.push_back(
        *std::max_element(calib.costs[j].begin(), calib.costs[j].end()));
  }
  return bounds;
}

void BudgetSpec::validate() const {
  if (budgets.size() != domains.size()) {
    throw ValidationError("budget spec: budgets and domains differ in length");
  }
  for (std::size_t j = 0; j < budgets.size(); ++j) {
    if (!(budgets[j] >= 0.0)) {
      throw ValidationError("budget " + std::to_string(j + 1) + " must be >= 0");
    }
    if (!(domains[j].lo <= domains[j].hi)) {
      throw ValidationError("domain " + std::to_string(j + 1) +
                            " has lo > hi");
    }
  }
}

void CostBounds::validate() const {
  if (v_min.size() != v_max.size()) {
    throw ValidationError("cost bounds: v_min and v_max differ in length");
  }
  for (std::size_t j = 0; j < v_max.size(); ++j) {
    if (!(v_min[j] >= 0.0)) {
      throw ValidationError("v_min " + std::to_string(j + 1) + " must be >= 0");
    }
    if (!(v_min[j] <= v_max[j])) {
      throw ValidationError("cost bounds " + std::to_string(j + 1) +
                            ": v_min > v_max");
    }
  }
}

}  // namespace riskgate
