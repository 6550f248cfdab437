#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "riskgate/calibrate.hpp"
#include "riskgate/dataset.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

/// Index in [1, m+1] of the behavior triggered by a score vector: the first
/// constraint whose score exceeds its threshold, or m+1 when every filter
/// passes.
std::size_t decide_behavior(std::span<const double> scores,
                            std::span<const double> thresholds);

struct ConstraintReport {
  double risk = 0.0;    // empirical test risk
  double budget = 0.0;
  double slack = 0.0;   // budget - risk
  /// β_j − A_j/(n_cal+1); absent when some earlier v_min is 0 (the recursion
  /// behind A_j requires costs bounded away from zero).
  std::optional<double> tightness_lower_edge;
  bool infeasible_at_domain_edge = false;
};

struct RiskReport {
  Algorithm algorithm = Algorithm::base;
  std::size_t n_test = 0;
  std::vector<double> thresholds;
  std::vector<ConstraintReport> constraints;
  double objective_risk = 0.0;
  std::vector<std::size_t> behavior_counts;  // length m+1, sums to n_test
};

/// Empirical risks of the thresholds on a test set, with budget-slack
/// diagnostics.
RiskReport evaluate_test_risks(const ThresholdSet& thresholds,
                               const CalibrationSet& test,
                               const BudgetSpec& spec, const CostBounds& bounds);

}  // namespace riskgate
