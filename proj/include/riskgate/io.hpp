#pragma once

#include <optional>
#include <string>

#include "riskgate/calibrate.hpp"
#include "riskgate/ltt.hpp"
#include "riskgate/report.hpp"
#include "riskgate/simulate.hpp"
#include "riskgate/sweep.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

/// One experiment definition: budgets, domains, optional explicit cost
/// bounds (estimated from the calibration data when absent), LTT settings,
/// and whether raw costs should be shifted by their calibration minima.
struct ExperimentConfig {
  BudgetSpec spec;
  std::optional<CostBounds> bounds;
  LttConfig ltt;
  bool shift_costs = false;
  /// When nonzero, base/multirisk search a uniform grid with this many points
  /// per domain instead of the exact jump points.
  std::size_t domain_grid_points = 0;
};

ExperimentConfig load_experiment_config(const std::string& path);

void save_thresholds(const ThresholdSet& ts, const std::string& path);
ThresholdSet load_thresholds(const std::string& path);

void save_report(const RiskReport& report, const std::string& path);

void save_sweep_csv(const SweepResult& sweep, const std::string& path);
void save_sweep_json(const SweepResult& sweep, const std::string& path);

MixtureConfig load_mixture_config(const std::string& path);
void save_monte_carlo(const MonteCarloReport& report, const std::string& path);

/// 17-significant-digit rendering used for CSV output.
std::string format_double(double x);

DataFormat data_format_for_path(const std::string& path);

}  // namespace riskgate
