#include "riskgate/report.hpp"

#include <cstdint>

#include "riskgate/kernels.hpp"

namespace riskgate {

std::size_t decide_behavior(std::span<const double> scores,
                            std::span<const double> thresholds) {
  if (scores.size() != thresholds.size()) {
    throw ValidationError("decide_behavior: scores and thresholds differ in length");
  }
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] > thresholds[j]) return j + 1;
  }
  return scores.size() + 1;
}

RiskReport evaluate_test_risks(const ThresholdSet& thresholds,
                               const CalibrationSet& test,
                               const BudgetSpec& spec, const CostBounds& bounds) {
  test.validate();
  spec.validate();
  bounds.validate();
  const std::size_t m = test.m;
  if (thresholds.size() != m || spec.size() != m || bounds.size() != m) {
    throw ValidationError("evaluate_test_risks: dimension mismatch");
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!spec.domains[j].contains(thresholds.thresholds[j])) {
      throw ValidationError("threshold " + std::to_string(j + 1) +
                            " lies outside its domain");
    }
  }

  const std::size_t n = test.n;
  const double dn = static_cast<double>(n);

  RiskReport report;
  report.algorithm = thresholds.algorithm;
  report.n_test = n;
  report.thresholds = thresholds.thresholds;
  report.behavior_counts.assign(m + 1, 0);

  std::vector<std::uint8_t> mask(n, 1);
  std::size_t prev_pass = n;
  for (std::size_t j = 0; j < m; ++j) {
    const double lam = thresholds.thresholds[j];
    ConstraintReport cr;
    cr.risk = kernels::exceed_cost_sum(test.score_column(j), test.cost_column(j),
                                       mask, lam) /
              dn;
    cr.budget = spec.budgets[j];
    cr.slack = cr.budget - cr.risk;
    bool edge_defined = true;
    for (std::size_t l = 0; l < j; ++l) edge_defined &= bounds.v_min[l] > 0.0;
    if (edge_defined) {
      cr.tightness_lower_edge =
          cr.budget - lower_bound_slack(bounds, j, thresholds.n_calibration);
    }
    cr.infeasible_at_domain_edge =
        j < thresholds.infeasible.size() && thresholds.infeasible[j] != 0;
    report.constraints.push_back(cr);

    kernels::mask_and_le(test.score_column(j), lam, mask);
    const std::size_t pass = kernels::mask_count(mask);
    report.behavior_counts[j] = prev_pass - pass;  // prefix passed, filter j fired
    prev_pass = pass;
  }
  report.behavior_counts[m] = prev_pass;
  report.objective_risk = kernels::masked_sum(test.objective_costs, mask) / dn;
  return report;
}

}  // namespace riskgate
