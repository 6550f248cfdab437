#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riskgate/calibrate.hpp"
#include "riskgate/dataset.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

/// Learn-Then-Test configuration. When budgets_tilde is non-empty it
/// overrides the budgets in the BudgetSpec handed to ltt_select (use
/// convert_budgets to derive them from in-expectation budgets).
struct LttConfig {
  double delta = 0.1;                    // confidence level in (0,1)
  std::vector<std::size_t> grid_sizes;   // per-dimension, default 31
  std::vector<double> budgets_tilde;
  // selection rule: minimum empirical objective among accepted configurations

  void validate(std::size_t m) const;
  std::size_t grid_size(std::size_t j) const {
    return grid_sizes.empty() ? 31 : grid_sizes[j];
  }
};

/// Standard normal CDF (via erfc; absolute error well below 1e-12).
double normal_cdf(double x);

/// CLT p-value for H: E[loss] > beta. With mean L̂ and Bessel-corrected
/// standard deviation σ̂: p = 1 − Φ((β − L̂)/(σ̂/√n)); if σ̂ = 0 the limiting
/// values are used (1 when L̂ > β, 0.5 at equality, 0 when L̂ < β).
double clt_pvalue(std::span<const double> losses, double beta);

/// β̃_j = (β_j − δ·v̂max_j)/(1 − δ); errors when any β̃_j < 0.
std::vector<double> convert_budgets(std::span<const double> budgets, double delta,
                                    std::span<const double> v_max_hat);

/// Learn Then Test over the Cartesian grid spanning the domains (both
/// endpoints included). A configuration is accepted when all m CLT p-values
/// are ≤ δ/(G·m), with G the total number of grid configurations (Bonferroni
/// over every tested hypothesis); among accepted configurations the one with
/// the smallest empirical objective wins, ties broken by lexicographic grid
/// order. When nothing is accepted, returns the domain maxima with every
/// constraint flagged infeasible.
ThresholdSet ltt_select(const CalibrationSet& calib, const BudgetSpec& spec,
                        const LttConfig& config);

}  // namespace riskgate
