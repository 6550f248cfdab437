#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riskgate/calibrate.hpp"
#include "riskgate/dataset.hpp"
#include "riskgate/ltt.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

/// Budget-sweep protocol: the swept constraint's budget runs over
/// (multiplier_lo..multiplier_hi) × base_fraction × v̂max, every other budget
/// stays at base_fraction × v̂max, and each cell is averaged over random
/// re-splits of the pooled calibration and test data.
struct SweepConfig {
  std::size_t constraint = 0;  // swept constraint, 0-based
  std::size_t n_budgets = 101;
  std::size_t n_splits = 10;
  double base_fraction = 0.10;
  double multiplier_lo = 1.0;
  double multiplier_hi = 5.0;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms;
  LttConfig ltt;  // delta and grid for the LTT cells

  void validate(std::size_t m) const;
};

struct SweepCell {
  double budget = 0.0;
  Algorithm algorithm = Algorithm::base;
  double objective_risk = 0.0;
  double objective_se = 0.0;
  std::vector<double> risks;  // per constraint
  std::vector<double> ses;
};

struct SweepResult {
  std::size_t constraint = 0;  // 0-based
  std::vector<double> budgets;
  std::vector<SweepCell> cells;  // budget-major, then algorithm
};

/// Runs the sweep; cells execute in parallel and are reduced in fixed order,
/// so the result depends only on the seed and the inputs. The budgets in
/// `spec` are ignored (the protocol sets all budgets); its domains are used
/// as-is.
SweepResult budget_sweep(const CalibrationSet& calib, const CalibrationSet& test,
                         const BudgetSpec& spec, const SweepConfig& config);

}  // namespace riskgate
