#include "riskgate/ltt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "riskgate/kernels.hpp"
#include "riskgate/threading.hpp"

namespace riskgate {

void LttConfig::validate(std::size_t m) const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("ltt delta must lie in (0,1)");
  }
  if (!grid_sizes.empty() && grid_sizes.size() != m) {
    throw ValidationError("ltt grid_sizes must cover all " + std::to_string(m) +
                          " constraints");
  }
  for (std::size_t g : grid_sizes) {
    if (g < 2) throw ValidationError("ltt grid sizes must be >= 2");
  }
  if (!budgets_tilde.empty() && budgets_tilde.size() != m) {
    throw ValidationError("ltt budgets_tilde must cover all " +
                          std::to_string(m) + " constraints");
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

double pvalue_from_moments(std::size_t n, double sum, double sum_sq, double beta) {
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  double sd = 0.0;
  if (n > 1) {
    const double var = (sum_sq - sum * sum / dn) / (dn - 1.0);
    sd = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  if (sd == 0.0) {
    if (mean > beta) return 1.0;
    if (mean == beta) return 0.5;
    return 0.0;
  }
  const double z = (beta - mean) / (sd / std::sqrt(dn));
  return 1.0 - normal_cdf(z);
}

}  // namespace

double clt_pvalue(std::span<const double> losses, double beta) {
  if (losses.empty()) throw ValidationError("clt_pvalue requires non-empty losses");
  double sum = 0.0, sum_sq = 0.0;
  kernels::vec_moments(losses, &sum, &sum_sq);
  return pvalue_from_moments(losses.size(), sum, sum_sq, beta);
}

std::vector<double> convert_budgets(std::span<const double> budgets, double delta,
                                    std::span<const double> v_max_hat) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("convert_budgets: delta must lie in (0,1)");
  }
  if (budgets.size() != v_max_hat.size()) {
    throw ValidationError("convert_budgets: budgets and v_max_hat differ in length");
  }
  std::vector<double> tilde;
  tilde.reserve(budgets.size());
  for (std::size_t j = 0; j < budgets.size(); ++j) {
    const double b = (budgets[j] - delta * v_max_hat[j]) / (1.0 - delta);
    if (b < 0.0) {
      throw ValidationError("convert_budgets: constraint " + std::to_string(j + 1) +
                            " gives a negative LTT budget; decrease delta");
    }
    tilde.push_back(b);
  }
  return tilde;
}

namespace {

struct BestConfig {
  bool valid = false;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t lex = 0;
  std::vector<double> lambdas;
};

void take_better(BestConfig& best, const BestConfig& other) {
  if (!other.valid) return;
  if (!best.valid || other.objective < best.objective ||
      (other.objective == best.objective && other.lex < best.lex)) {
    best = other;
  }
}

}  // namespace

ThresholdSet ltt_select(const CalibrationSet& calib, const BudgetSpec& spec,
                        const LttConfig& config) {
  calib.validate();
  spec.validate();
  if (spec.size() != calib.m) {
    throw ValidationError("budget spec covers " + std::to_string(spec.size()) +
                          " constraints but data has " + std::to_string(calib.m));
  }
  config.validate(calib.m);

  const std::size_t m = calib.m;
  const std::size_t n = calib.n;

  std::vector<double> budgets =
      config.budgets_tilde.empty() ? spec.budgets : config.budgets_tilde;

  std::vector<std::vector<double>> grid(m);
  std::size_t total_configs = 1;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t g = config.grid_size(j);
    grid[j].reserve(g);
    const Interval dom = spec.domains[j];
    for (std::size_t t = 0; t < g; ++t) {
      grid[j].push_back(dom.lo + (dom.hi - dom.lo) * static_cast<double>(t) /
                                     static_cast<double>(g - 1));
    }
    total_configs *= g;
  }
  const double accept_level =
      config.delta / (static_cast<double>(total_configs) * static_cast<double>(m));

  std::vector<std::size_t> strides(m, 1);
  for (std::size_t j = m - 1; j-- > 0;) strides[j] = strides[j + 1] * grid[j + 1].size();

  // Depth-first walk with one prefix-pass mask per level. A p-value above the
  // acceptance level at level j rejects the whole subtree, since it is shared
  // by every deeper configuration.
  struct Walker {
    const CalibrationSet& data;
    const std::vector<std::vector<double>>& grid;
    const std::vector<std::size_t>& strides;
    const std::vector<double>& budgets;
    double accept_level;
    std::vector<std::vector<std::uint8_t>> masks;  // masks[j]: pass of S_1..S_j
    std::vector<double> lambda_stack;
    BestConfig best;

    void descend(std::size_t j, std::size_t lex_base) {
      const std::size_t n = data.n;
      const auto& prefix_mask =
          j == 0 ? masks.back() : masks[j - 1];  // masks.back() is all-ones
      for (std::size_t t = 0; t < grid[j].size(); ++t) {
        const double lam = grid[j][t];
        double sum = 0.0, sum_sq = 0.0;
        kernels::exceed_cost_moments(data.score_column(j), data.cost_column(j),
                                     prefix_mask, lam, &sum, &sum_sq);
        const double p = pvalue_from_moments(n, sum, sum_sq, budgets[j]);
        if (p > accept_level) continue;

        masks[j] = prefix_mask;
        kernels::mask_and_le(data.score_column(j), lam, masks[j]);
        lambda_stack[j] = lam;
        const std::size_t lex = lex_base + t * strides[j];
        if (j + 1 == grid.size()) {
          const double objective =
              kernels::masked_sum(data.objective_costs, masks[j]) /
              static_cast<double>(n);
          BestConfig cand;
          cand.valid = true;
          cand.objective = objective;
          cand.lex = lex;
          cand.lambdas = lambda_stack;
          take_better(best, cand);
        } else {
          descend(j + 1, lex);
        }
      }
    }
  };

  // Parallel over the first grid dimension; merging in index order keeps the
  // result independent of the thread count.
  const std::size_t top = grid[0].size();
  std::vector<BestConfig> per_top(top);
  parallel_for(top, [&](std::size_t i0) {
    Walker w{calib, grid, strides, budgets, accept_level, {}, {}, {}};
    w.masks.assign(m + 1, std::vector<std::uint8_t>(n, 1));
    w.lambda_stack.assign(m, 0.0);

    const double lam = grid[0][i0];
    double sum = 0.0, sum_sq = 0.0;
    kernels::exceed_cost_moments(calib.score_column(0), calib.cost_column(0),
                                 w.masks[m], lam, &sum, &sum_sq);
    const double p = pvalue_from_moments(n, sum, sum_sq, budgets[0]);
    if (p > accept_level) return;

    w.masks[0] = w.masks[m];
    kernels::mask_and_le(calib.score_column(0), lam, w.masks[0]);
    w.lambda_stack[0] = lam;
    if (m == 1) {
      const double objective =
          kernels::masked_sum(calib.objective_costs, w.masks[0]) /
          static_cast<double>(n);
      w.best = {true, objective, i0 * strides[0], w.lambda_stack};
    } else {
      w.descend(1, i0 * strides[0]);
    }
    per_top[i0] = std::move(w.best);
  });

  BestConfig best;
  for (const auto& b : per_top) take_better(best, b);

  ThresholdSet out;
  out.algorithm = Algorithm::ltt;
  out.n_calibration = n;
  if (best.valid) {
    out.thresholds = best.lambdas;
    out.infeasible.assign(m, 0);
  } else {
    out.thresholds.reserve(m);
    for (std::size_t j = 0; j < m; ++j) out.thresholds.push_back(spec.domains[j].hi);
    out.infeasible.assign(m, 1);
  }
  return out;
}

}  // namespace riskgate
