// riskgate — calibration of prioritized risk-controlling thresholds.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskgate/io.hpp"

namespace {

using namespace riskgate;

std::vector<Algorithm> parse_algorithms(const std::string& csv) {
  std::vector<Algorithm> algos;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cur.empty()) algos.push_back(algorithm_from_name(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (algos.empty()) throw ValidationError("no algorithms given");
  return algos;
}

CalibrationSet load_data_with_config(const std::string& path,
                                     const ExperimentConfig& config) {
  const DataFormat format = data_format_for_path(path);
  if (!config.shift_costs) return load_dataset(path, format);
  CalibrationSet raw = load_dataset(path, format, /*allow_negative_costs=*/true);
  return apply_shifts(raw, compute_cost_shifts(raw));
}

CostBounds bounds_for(const ExperimentConfig& config, const CalibrationSet& calib) {
  return config.bounds ? *config.bounds : estimate_cost_bounds(calib);
}

ThresholdSet run_algorithm(Algorithm algo, const CalibrationSet& calib,
                           const ExperimentConfig& config) {
  DomainGrids grids;
  const DomainGrids* grids_ptr = nullptr;
  if (config.domain_grid_points > 0) {
    grids = uniform_domain_grids(config.spec, config.domain_grid_points);
    grids_ptr = &grids;
  }
  switch (algo) {
    case Algorithm::base:
      return multirisk_base(calib, config.spec, grids_ptr);
    case Algorithm::multirisk:
      return multirisk(calib, config.spec, bounds_for(config, calib), grids_ptr);
    case Algorithm::conformal_m1:
      return conformal_m1(calib, config.spec, bounds_for(config, calib));
    case Algorithm::ltt: {
      LttConfig ltt = config.ltt;
      if (ltt.budgets_tilde.empty()) {
        ltt.budgets_tilde = convert_budgets(config.spec.budgets, ltt.delta,
                                            bounds_for(config, calib).v_max);
      }
      return ltt_select(calib, config.spec, ltt);
    }
  }
  throw ValidationError("unhandled algorithm");
}

int cmd_calibrate(const std::string& algo_name, const std::string& data_path,
                  const std::string& config_path, const std::string& out_path) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const CalibrationSet calib = load_data_with_config(data_path, config);
  const ThresholdSet ts = run_algorithm(algorithm_from_name(algo_name), calib, config);
  save_thresholds(ts, out_path);
  std::printf("%s: n=%zu m=%zu ->", algorithm_name(ts.algorithm).c_str(), calib.n,
              calib.m);
  for (double t : ts.thresholds) std::printf(" %.6g", t);
  std::printf("\n");
  return 0;
}

int cmd_evaluate(const std::string& thresholds_path, const std::string& data_path,
                 const std::string& config_path, const std::string& out_path) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const CalibrationSet test = load_data_with_config(data_path, config);
  const ThresholdSet ts = load_thresholds(thresholds_path);
  const CostBounds bounds = bounds_for(config, test);
  const RiskReport report = evaluate_test_risks(ts, test, config.spec, bounds);
  save_report(report, out_path);
  for (std::size_t j = 0; j < report.constraints.size(); ++j) {
    std::printf("constraint %zu: risk=%.6g budget=%.6g slack=%.6g%s\n", j + 1,
                report.constraints[j].risk, report.constraints[j].budget,
                report.constraints[j].slack,
                report.constraints[j].infeasible_at_domain_edge
                    ? " [infeasible at domain edge]"
                    : "");
  }
  std::printf("objective risk: %.6g\n", report.objective_risk);
  return 0;
}

int cmd_sweep(const std::string& calib_path, const std::string& test_path,
              const std::string& config_path, std::size_t constraint_1based,
              std::size_t n_budgets, std::size_t n_splits, double base_fraction,
              double mult_lo, double mult_hi, const std::string& algos_csv,
              std::uint64_t seed, const std::string& out_csv,
              const std::string& out_json) {
  const ExperimentConfig config = load_experiment_config(config_path);
  const CalibrationSet calib = load_data_with_config(calib_path, config);
  const CalibrationSet test = load_data_with_config(test_path, config);
  if (constraint_1based < 1) throw ValidationError("--constraint is 1-based");

  SweepConfig sweep;
  sweep.constraint = constraint_1based - 1;
  sweep.n_budgets = n_budgets;
  sweep.n_splits = n_splits;
  sweep.base_fraction = base_fraction;
  sweep.multiplier_lo = mult_lo;
  sweep.multiplier_hi = mult_hi;
  sweep.seed = seed;
  sweep.algorithms = parse_algorithms(algos_csv);
  sweep.ltt = config.ltt;

  const SweepResult result = budget_sweep(calib, test, config.spec, sweep);
  if (!out_csv.empty()) save_sweep_csv(result, out_csv);
  if (!out_json.empty()) save_sweep_json(result, out_json);
  std::printf("sweep: constraint %zu, %zu budgets x %zu algorithms\n",
              constraint_1based, result.budgets.size(), sweep.algorithms.size());
  return 0;
}

int cmd_simulate(const std::string& config_path, std::size_t batches,
                 std::uint64_t seed, bool seed_given, const std::string& algos_csv,
                 const std::string& out_path) {
  MixtureConfig config = load_mixture_config(config_path);
  if (seed_given) config.seed = seed;
  const std::vector<Algorithm> algos = parse_algorithms(algos_csv);
  const MonteCarloReport report = monte_carlo_run(config, algos, batches);
  if (!out_path.empty()) save_monte_carlo(report, out_path);
  for (const auto& stats : report.results) {
    std::printf("%s:", algorithm_name(stats.algorithm).c_str());
    for (std::size_t j = 0; j < stats.mean.size(); ++j) {
      std::printf(" risk_%zu=%.6f+-%.6f", j + 1, stats.mean[j], stats.se[j]);
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_oracle(const std::string& config_path, const std::string& out_path) {
  const nlohmann::json doc = [&] {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open " + config_path);
    nlohmann::json d;
    try {
      in >> d;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(config_path + ": " + e.what());
    }
    return d;
  }();

  const std::string model = doc.value("model", "mixture");
  std::vector<double> lambda_star;
  std::vector<double> risks;
  double objective = 0.0;
  if (model == "mixture") {
    const MixtureConfig config = load_mixture_config(config_path);
    MixturePopulation pop(config);
    lambda_star = population_minimizer(pop, config.budget_spec());
    risks = population_risk_mixture(lambda_star, config);
    objective = population_objective_mixture(lambda_star, config);
  } else if (model == "uniform") {
    if (!doc.contains("m") || !doc.contains("budgets")) {
      throw ValidationError(config_path + ": uniform model needs 'm' and 'budgets'");
    }
    const std::size_t m = doc["m"].get<std::size_t>();
    BudgetSpec spec;
    for (const auto& b : doc["budgets"]) spec.budgets.push_back(b.get<double>());
    spec.domains.assign(m, Interval{0.0, 1.0});
    if (spec.budgets.size() != m) {
      throw ValidationError(config_path + ": budgets must have length m");
    }
    UniformPopulation pop(m);
    lambda_star = population_minimizer(pop, spec);
    risks = population_risk_uniform(lambda_star);
    objective = population_objective_uniform(lambda_star);
  } else {
    throw ValidationError(config_path + ": model must be 'mixture' or 'uniform'");
  }

  nlohmann::json out;
  out["model"] = model;
  out["lambda_star"] = lambda_star;
  out["constraint_risks"] = risks;
  out["objective_risk"] = objective;
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot write " + out_path);
    f << out.dump(2) << "\n";
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riskgate: threshold calibration under prioritized risk budgets"};
  app.require_subcommand(1);

  std::string algo = "multirisk", data, config_path, out, thresholds_path;
  std::string test_path, out_csv, out_json, algos_csv = "multirisk,base";
  std::size_t constraint = 1, n_budgets = 101, n_splits = 10, batches = 1000;
  double base_fraction = 0.10, mult_lo = 1.0, mult_hi = 5.0;
  std::uint64_t seed = 0;

  auto* calibrate = app.add_subcommand("calibrate", "select thresholds");
  calibrate->add_option("--algo", algo, "base|multirisk|conformal_m1|ltt");
  calibrate->add_option("--data", data, "calibration data (csv or json)")->required();
  calibrate->add_option("--config", config_path, "experiment config json")->required();
  calibrate->add_option("--out", out, "output thresholds json")->required();

  auto* evaluate = app.add_subcommand("evaluate", "evaluate thresholds on test data");
  evaluate->add_option("--thresholds", thresholds_path, "thresholds json")->required();
  evaluate->add_option("--data", data, "test data (csv or json)")->required();
  evaluate->add_option("--config", config_path, "experiment config json")->required();
  evaluate->add_option("--out", out, "output report json")->required();

  auto* sweep = app.add_subcommand("sweep", "budget sweep over re-splits");
  sweep->add_option("--data", data, "calibration data")->required();
  sweep->add_option("--test", test_path, "test data")->required();
  sweep->add_option("--config", config_path, "experiment config json")->required();
  sweep->add_option("--constraint", constraint, "swept constraint (1-based)");
  sweep->add_option("--budgets", n_budgets, "number of budget points");
  sweep->add_option("--splits", n_splits, "number of random re-splits");
  sweep->add_option("--base-fraction", base_fraction,
                    "held budgets as a fraction of the cost maximum");
  sweep->add_option("--mult-lo", mult_lo, "smallest budget multiplier");
  sweep->add_option("--mult-hi", mult_hi, "largest budget multiplier");
  sweep->add_option("--algos", algos_csv, "comma-separated algorithms");
  sweep->add_option("--seed", seed, "rng seed");
  sweep->add_option("--out-csv", out_csv, "output csv");
  sweep->add_option("--out-json", out_json, "output json");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo mixture harness");
  simulate->add_option("--config", config_path, "mixture config json")->required();
  simulate->add_option("--batches", batches, "number of calibration draws");
  auto* seed_opt = simulate->add_option("--seed", seed, "rng seed (overrides config)");
  simulate->add_option("--algos", algos_csv, "comma-separated algorithms");
  simulate->add_option("--out", out, "output report json");

  auto* oracle = app.add_subcommand("oracle", "closed-form population minimizer");
  oracle->add_option("--config", config_path, "model config json")->required();
  oracle->add_option("--out", out, "output json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(algo, data, config_path, out);
    if (evaluate->parsed()) {
      return cmd_evaluate(thresholds_path, data, config_path, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(data, test_path, config_path, constraint, n_budgets,
                       n_splits, base_fraction, mult_lo, mult_hi, algos_csv,
                       seed, out_csv, out_json);
    }
    if (simulate->parsed()) {
      return cmd_simulate(config_path, batches, seed, seed_opt->count() > 0,
                          algos_csv, out);
    }
    if (oracle->parsed()) return cmd_oracle(config_path, out);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
