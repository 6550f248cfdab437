#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "riskgate/dataset.hpp"
#include "riskgate/riskfn.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

enum class Algorithm { base, multirisk, conformal_m1, ltt };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

/// Selected thresholds. For the conformal variant of the calibration, `aux`
/// holds the full auxiliary table keyed by (constraint j, superscript 2k),
/// both as in the threshold names λ̂_j^(2k): j is 1-based, the superscript is
/// even, and thresholds[j-1] == aux[(j, 2)].
struct ThresholdSet {
  std::vector<double> thresholds;
  std::map<std::pair<std::size_t, std::size_t>, double> aux;
  Algorithm algorithm = Algorithm::base;
  /// Per constraint: the budget was violated even at the domain's upper
  /// endpoint, so the conventional fallback λ_max was returned.
  std::vector<std::uint8_t> infeasible;
  std::size_t n_calibration = 0;

  std::size_t size() const { return thresholds.size(); }
};

/// Budget shrinkages β_j^(k) = β_j − k·δ_j with δ_j = (v_max−v_min)/(n+1).
struct TightenedBudgets {
  std::vector<double> base_budgets;
  std::vector<double> deltas;

  double budget(std::size_t j, std::size_t k) const {
    return base_budgets[j] - static_cast<double>(k) * deltas[j];
  }
};

TightenedBudgets tighten_budgets(const BudgetSpec& spec, const CostBounds& bounds,
                                 std::size_t n);

/// Optional restriction of each threshold search to a sorted finite grid
/// (one vector per constraint; empty vector = exact search over jump points).
/// Matches the discrete-grid variant of the generalized inverse.
using DomainGrids = std::vector<std::vector<double>>;

/// points_per_dim equally spaced values spanning each domain, endpoints
/// included.
DomainGrids uniform_domain_grids(const BudgetSpec& spec, std::size_t points_per_dim);

/// Sequential empirical-risk inversion (no finite-sample guarantee).
ThresholdSet multirisk_base(const CalibrationSet& calib, const BudgetSpec& spec,
                            const DomainGrids* grids = nullptr);

/// Conformal threshold selection: builds the full table of bumped-inverse
/// thresholds λ̂_j^(2k) with shrunken budgets and deploys the (2) column.
/// Every calibration cost must lie within the declared bounds.
ThresholdSet multirisk(const CalibrationSet& calib, const BudgetSpec& spec,
                       const CostBounds& bounds, const DomainGrids* grids = nullptr);

/// Single-constraint conformal risk control,
/// inf{λ : (n·g(λ) + v_max)/(n+1) ≤ β}, kept as an independent route for the
/// m=1 agreement check.
ThresholdSet conformal_m1(const CalibrationSet& calib, const BudgetSpec& spec,
                          const CostBounds& bounds);

/// h_j(t) from the recursion h_1 = 0,
/// h_j(t) = v_max[j] Σ_{l<j} (t(v_max[l]−v_min[l]) + v_max[l] + h_l(t)) / v_min[l].
/// j is 0-based; requires v_min[l] > 0 for l < j.
double h_recursion(const CostBounds& bounds, std::size_t j, unsigned t);

/// A_j/(n+1) with A_j = 2 v_max[j] − v_min[j] + h_j(2); the width of the
/// theoretical tightness window below β_j. j is 0-based.
double lower_bound_slack(const CostBounds& bounds, std::size_t j, std::size_t n);

}  // namespace riskgate
