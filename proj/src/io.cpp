#include "riskgate/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace riskgate {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return doc;
}

void write_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

std::vector<double> require_doubles(const json& doc, const std::string& field,
                                    const std::string& path) {
  if (!doc.contains(field) || !doc[field].is_array()) {
    throw ValidationError(path + ": missing array field '" + field + "'");
  }
  std::vector<double> out;
  for (const auto& v : doc[field]) out.push_back(v.get<double>());
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

DataFormat data_format_for_path(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return DataFormat::json;
  }
  return DataFormat::csv;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const json doc = read_json_file(path);
  ExperimentConfig config;
  config.spec.budgets = require_doubles(doc, "budgets", path);
  if (!doc.contains("domains") || !doc["domains"].is_array()) {
    throw ValidationError(path + ": missing array field 'domains'");
  }
  for (const auto& d : doc["domains"]) {
    if (!d.is_array() || d.size() != 2) {
      throw ValidationError(path + ": each domain must be [lo, hi]");
    }
    config.spec.domains.push_back({d[0].get<double>(), d[1].get<double>()});
  }
  config.spec.validate();

  if (doc.contains("bounds")) {
    CostBounds bounds;
    bounds.v_min = require_doubles(doc["bounds"], "v_min", path);
    bounds.v_max = require_doubles(doc["bounds"], "v_max", path);
    bounds.validate();
    config.bounds = std::move(bounds);
  }
  if (doc.contains("ltt")) {
    const json& l = doc["ltt"];
    if (l.contains("delta")) config.ltt.delta = l["delta"].get<double>();
    if (l.contains("grid_sizes")) {
      for (const auto& g : l["grid_sizes"]) {
        config.ltt.grid_sizes.push_back(g.get<std::size_t>());
      }
    }
    if (l.contains("budgets_tilde")) {
      config.ltt.budgets_tilde = require_doubles(l, "budgets_tilde", path);
    }
  }
  if (doc.contains("shift_costs")) config.shift_costs = doc["shift_costs"].get<bool>();
  if (doc.contains("domain_grid")) {
    config.domain_grid_points = doc["domain_grid"].get<std::size_t>();
  }
  return config;
}

void save_thresholds(const ThresholdSet& ts, const std::string& path) {
  json doc;
  doc["algorithm"] = algorithm_name(ts.algorithm);
  doc["lambda"] = ts.thresholds;
  json aux = json::object();
  for (const auto& [key, value] : ts.aux) {
    aux[std::to_string(key.first) + "," + std::to_string(key.second)] = value;
  }
  doc["aux"] = std::move(aux);
  json infeasible = json::array();
  for (std::uint8_t f : ts.infeasible) infeasible.push_back(f != 0);
  doc["infeasible"] = std::move(infeasible);
  doc["n_calibration"] = ts.n_calibration;
  write_json_file(doc, path);
}

ThresholdSet load_thresholds(const std::string& path) {
  const json doc = read_json_file(path);
  ThresholdSet ts;
  if (!doc.contains("algorithm") || !doc.contains("lambda")) {
    throw ValidationError(path + ": thresholds file needs 'algorithm' and 'lambda'");
  }
  ts.algorithm = algorithm_from_name(doc["algorithm"].get<std::string>());
  for (const auto& v : doc["lambda"]) ts.thresholds.push_back(v.get<double>());
  if (doc.contains("aux")) {
    for (const auto& [key, value] : doc["aux"].items()) {
      const auto comma = key.find(',');
      std::size_t j = 0, k = 0;
      try {
        if (comma == std::string::npos) throw std::invalid_argument(key);
        j = std::stoul(key.substr(0, comma));
        k = std::stoul(key.substr(comma + 1));
      } catch (const std::exception&) {
        throw ValidationError(path + ": aux keys must look like 'j,k', got '" +
                              key + "'");
      }
      ts.aux[{j, k}] = value.get<double>();
    }
  }
  if (doc.contains("infeasible")) {
    for (const auto& f : doc["infeasible"]) {
      ts.infeasible.push_back(f.get<bool>() ? 1 : 0);
    }
  }
  if (doc.contains("n_calibration")) {
    ts.n_calibration = doc["n_calibration"].get<std::size_t>();
  }
  return ts;
}

void save_report(const RiskReport& report, const std::string& path) {
  json doc;
  doc["algorithm"] = algorithm_name(report.algorithm);
  doc["n_test"] = report.n_test;
  doc["thresholds"] = report.thresholds;
  json constraints = json::array();
  for (std::size_t j = 0; j < report.constraints.size(); ++j) {
    const ConstraintReport& cr = report.constraints[j];
    json c;
    c["j"] = j + 1;
    c["risk"] = cr.risk;
    c["budget"] = cr.budget;
    c["slack"] = cr.slack;
    if (cr.tightness_lower_edge) {
      c["tightness_lower_edge"] = *cr.tightness_lower_edge;
    } else {
      c["tightness_lower_edge"] = nullptr;
    }
    c["infeasible_at_domain_edge"] = cr.infeasible_at_domain_edge;
    constraints.push_back(std::move(c));
  }
  doc["constraints"] = std::move(constraints);
  doc["objective_risk"] = report.objective_risk;
  doc["behavior_counts"] = report.behavior_counts;
  write_json_file(doc, path);
}

void save_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const std::size_t m = sweep.cells.empty() ? 0 : sweep.cells.front().risks.size();
  out << "budget,algorithm,objective_risk,objective_se";
  for (std::size_t j = 1; j <= m; ++j) out << ",risk_" << j << ",se_" << j;
  out << "\n";
  for (const SweepCell& cell : sweep.cells) {
    out << format_double(cell.budget) << "," << algorithm_name(cell.algorithm)
        << "," << format_double(cell.objective_risk) << ","
        << format_double(cell.objective_se);
    for (std::size_t j = 0; j < m; ++j) {
      out << "," << format_double(cell.risks[j]) << "," << format_double(cell.ses[j]);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_sweep_json(const SweepResult& sweep, const std::string& path) {
  json doc;
  doc["constraint"] = sweep.constraint + 1;
  doc["budgets"] = sweep.budgets;
  json cells = json::array();
  for (const SweepCell& cell : sweep.cells) {
    json c;
    c["budget"] = cell.budget;
    c["algorithm"] = algorithm_name(cell.algorithm);
    c["objective_risk"] = cell.objective_risk;
    c["objective_se"] = cell.objective_se;
    c["risks"] = cell.risks;
    c["ses"] = cell.ses;
    cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells);
  write_json_file(doc, path);
}

MixtureConfig load_mixture_config(const std::string& path) {
  const json doc = read_json_file(path);
  MixtureConfig config;
  if (!doc.contains("m") || !doc.contains("n_cal")) {
    throw ValidationError(path + ": mixture config needs 'm' and 'n_cal'");
  }
  config.m = doc["m"].get<std::size_t>();
  config.n_cal = doc["n_cal"].get<std::size_t>();
  config.v_max = require_doubles(doc, "v_max", path);
  config.p = require_doubles(doc, "p", path);
  config.budgets = require_doubles(doc, "budgets", path);
  if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("lambda_grid")) {
    config.lambda_grid = doc["lambda_grid"].get<std::size_t>();
  }
  config.validate();
  return config;
}

void save_monte_carlo(const MonteCarloReport& report, const std::string& path) {
  json doc = json::array();
  for (const auto& stats : report.results) {
    json entry;
    entry["algorithm"] = algorithm_name(stats.algorithm);
    entry["n_batches"] = report.n_batches;
    if (report.degenerate) entry["degenerate"] = true;
    json constraints = json::array();
    for (std::size_t j = 0; j < stats.mean.size(); ++j) {
      constraints.push_back(
          {{"j", j + 1}, {"mean", stats.mean[j]}, {"se", stats.se[j]}});
    }
    entry["constraints"] = std::move(constraints);
    doc.push_back(std::move(entry));
  }
  write_json_file(doc, path);
}

}  // namespace riskgate
