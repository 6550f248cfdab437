#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "riskgate/calibrate.hpp"
#include "riskgate/dataset.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

/// Spike-plus-uniform score generator: S_j equals v_max[j] with probability
/// p[j] and is Uniform(0,1) otherwise; the j-th cost is coupled as V_j = S_j.
/// The objective cost is normalized to 1.
struct MixtureConfig {
  std::size_t m = 0;
  std::vector<double> v_max;
  std::vector<double> p;
  std::size_t n_cal = 0;
  std::vector<double> budgets;
  std::uint64_t seed = 0;
  /// Threshold searches run over this many equally spaced points per domain,
  /// matching the reference experiment protocol; 0 searches the exact jump
  /// points instead.
  std::size_t lambda_grid = 61;

  void validate() const;
  /// Search intervals default to [0, v_max[j]] so the spike is reachable.
  BudgetSpec budget_spec() const;
  CostBounds cost_bounds() const;  // v_min = 0, v_max as configured
};

CalibrationSet gen_mixture(const MixtureConfig& config, std::uint64_t batch_index);

/// All scores i.i.d. Uniform(0,1), every cost (constraint and objective) 1.
CalibrationSet gen_uniform_iid(std::size_t m, std::size_t n, std::uint64_t seed,
                               std::uint64_t batch_index = 0);

/// Closed-form E L_j under the mixture, j = 1..m.
std::vector<double> population_risk_mixture(std::span<const double> thresholds,
                                            const MixtureConfig& config);
double population_objective_mixture(std::span<const double> thresholds,
                                    const MixtureConfig& config);

/// Closed-form E L_j for uniform scores with unit costs.
std::vector<double> population_risk_uniform(std::span<const double> thresholds);
double population_objective_uniform(std::span<const double> thresholds);

/// Closed-form population risk family used by the minimizer oracle; the
/// constraint index is the prefix length.
class PopulationModel {
public:
  virtual ~PopulationModel() = default;
  virtual std::size_t dim() const = 0;
  virtual double constraint_risk(std::span<const double> prefix,
                                 double lambda) const = 0;
};

class MixturePopulation final : public PopulationModel {
public:
  explicit MixturePopulation(MixtureConfig config);
  std::size_t dim() const override { return config_.m; }
  double constraint_risk(std::span<const double> prefix, double lambda) const override;

private:
  MixtureConfig config_;
};

class UniformPopulation final : public PopulationModel {
public:
  explicit UniformPopulation(std::size_t m) : m_(m) {}
  std::size_t dim() const override { return m_; }
  double constraint_risk(std::span<const double> prefix, double lambda) const override;

private:
  std::size_t m_;
};

/// Sequentially inverts the closed-form risks by bisection (absolute
/// tolerance 1e-10) with the sup-of-empty-set = domain.lo convention; when
/// the risk never drops to the budget the domain's upper endpoint is
/// returned.
std::vector<double> population_minimizer(const PopulationModel& model,
                                         const BudgetSpec& spec);

struct MonteCarloReport {
  struct AlgoStats {
    Algorithm algorithm;
    std::vector<double> mean;  // per constraint
    std::vector<double> se;    // sample std / sqrt(n_batches)
  };
  std::size_t n_batches = 0;
  bool degenerate = false;  // single batch: SEs are reported as 0
  std::vector<AlgoStats> results;
};

/// For each batch: draw a calibration set, run each algorithm, and evaluate
/// the closed-form population risks at the selected thresholds. Batches run
/// in parallel; sums are reduced in batch order, so reports are identical
/// regardless of the thread count.
MonteCarloReport monte_carlo_run(const MixtureConfig& config,
                                 std::span<const Algorithm> algorithms,
                                 std::size_t n_batches);

/// Two-point score distribution for the discrete-consistency check:
/// S ∈ {lo, hi} with P(hi) = p_hi, unit costs, i.i.d. across constraints.
struct TwoPointConfig {
  std::size_t m = 1;
  double lo = 0.2;
  double hi = 0.8;
  double p_hi = 0.3;
  std::vector<double> budgets;
  std::uint64_t seed = 0;
  Interval domain{0.0, 1.0};

  void validate() const;
  BudgetSpec budget_spec() const;
  CostBounds cost_bounds() const;  // unit costs: [1, 1]
};

CalibrationSet gen_two_point(const TwoPointConfig& config, std::size_t n,
                             std::uint64_t batch_index);

/// Exact sequential population minimizer obtained by enumerating the support;
/// errors when a budget coincides with a value of the population risk (the
/// non-degenerate-risk-level condition).
std::vector<double> two_point_population_minimizer(const TwoPointConfig& config);

struct ConsistencyRow {
  std::size_t n;
  double fraction;  // trials where the selected thresholds equal the minimizer
};

/// Fraction of trials (per calibration size) in which the conformal
/// calibration reproduces the enumerated minimizer exactly.
std::vector<ConsistencyRow> consistency_check_discrete(
    std::span<const std::size_t> n_list, const TwoPointConfig& config,
    std::size_t trials);

}  // namespace riskgate
