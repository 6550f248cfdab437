#include "riskgate/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "riskgate/report.hpp"
#include "riskgate/rng.hpp"
#include "riskgate/threading.hpp"

namespace riskgate {

void SweepConfig::validate(std::size_t m) const {
  if (constraint >= m) throw ValidationError("sweep: constraint index out of range");
  if (n_budgets < 1) throw ValidationError("sweep: n_budgets must be >= 1");
  if (n_splits < 1) throw ValidationError("sweep: n_splits must be >= 1");
  if (!(base_fraction > 0.0)) throw ValidationError("sweep: base fraction must be > 0");
  if (!(multiplier_lo <= multiplier_hi)) {
    throw ValidationError("sweep: multiplier range is inverted");
  }
  if (algorithms.empty()) throw ValidationError("sweep: no algorithms requested");
  ltt.validate(m);
}

namespace {

CalibrationSet select_rows(const CalibrationSet& pooled,
                           const std::vector<std::size_t>& idx, std::size_t begin,
                           std::size_t count) {
  CalibrationSet out;
  out.n = count;
  out.m = pooled.m;
  out.scores.assign(pooled.m, std::vector<double>(count));
  out.costs.assign(pooled.m, std::vector<double>(count));
  out.objective_costs.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = idx[begin + i];
    for (std::size_t j = 0; j < pooled.m; ++j) {
      out.scores[j][i] = pooled.scores[j][r];
      out.costs[j][i] = pooled.costs[j][r];
    }
    out.objective_costs[i] = pooled.objective_costs[r];
  }
  return out;
}

}  // namespace

SweepResult budget_sweep(const CalibrationSet& calib, const CalibrationSet& test,
                         const BudgetSpec& spec, const SweepConfig& config) {
  calib.validate();
  test.validate();
  if (calib.m != test.m) {
    throw ValidationError("sweep: calibration and test sets disagree on m");
  }
  const std::size_t m = calib.m;
  if (spec.domains.size() != m) {
    throw ValidationError("sweep: spec domains must cover all constraints");
  }
  config.validate(m);

  // Pool the two sets; splits reuse the original sizes.
  CalibrationSet pooled;
  pooled.m = m;
  pooled.n = calib.n + test.n;
  pooled.scores.assign(m, {});
  pooled.costs.assign(m, {});
  for (std::size_t j = 0; j < m; ++j) {
    pooled.scores[j] = calib.scores[j];
    pooled.scores[j].insert(pooled.scores[j].end(), test.scores[j].begin(),
                            test.scores[j].end());
    pooled.costs[j] = calib.costs[j];
    pooled.costs[j].insert(pooled.costs[j].end(), test.costs[j].begin(),
                           test.costs[j].end());
  }
  pooled.objective_costs = calib.objective_costs;
  pooled.objective_costs.insert(pooled.objective_costs.end(),
                                test.objective_costs.begin(),
                                test.objective_costs.end());

  // The budget grid is anchored to the pooled cost maxima so it is the same
  // for every split.
  std::vector<double> v_max_hat(m);
  for (std::size_t j = 0; j < m; ++j) {
    v_max_hat[j] = *std::max_element(pooled.costs[j].begin(), pooled.costs[j].end());
  }

  SweepResult result;
  result.constraint = config.constraint;
  result.budgets.reserve(config.n_budgets);
  for (std::size_t k = 0; k < config.n_budgets; ++k) {
    const double frac =
        config.n_budgets == 1
            ? 0.0
            : static_cast<double>(k) / static_cast<double>(config.n_budgets - 1);
    const double mult =
        config.multiplier_lo + (config.multiplier_hi - config.multiplier_lo) * frac;
    result.budgets.push_back(mult * config.base_fraction * v_max_hat[config.constraint]);
  }

  // Pre-build the splits (shuffles depend only on seed and split index).
  struct Split {
    CalibrationSet calib;
    CalibrationSet test;
    CostBounds bounds;
  };
  std::vector<Split> splits(config.n_splits);
  parallel_for(config.n_splits, [&](std::size_t s) {
    std::vector<std::size_t> idx(pooled.n);
    for (std::size_t i = 0; i < pooled.n; ++i) idx[i] = i;
    for (std::size_t i = pooled.n; i-- > 1;) {
      const std::uint64_t key = rng::draw_key(config.seed, s, i, 0, 2);
      std::swap(idx[i], idx[rng::bounded(key, i + 1)]);
    }
    splits[s].calib = select_rows(pooled, idx, 0, calib.n);
    splits[s].test = select_rows(pooled, idx, calib.n, test.n);
    splits[s].bounds = estimate_cost_bounds(splits[s].calib);
  });

  const std::size_t n_algos = config.algorithms.size();
  const std::size_t n_cells = config.n_budgets * n_algos;

  // values[(cell * n_splits + s) * (m+1) + q]: q = 0 objective, q-1 constraint.
  std::vector<double> values(n_cells * config.n_splits * (m + 1));
  parallel_for(config.n_budgets * config.n_splits, [&](std::size_t task) {
    const std::size_t k = task / config.n_splits;
    const std::size_t s = task % config.n_splits;
    const Split& split = splits[s];

    BudgetSpec cell_spec;
    cell_spec.domains = spec.domains;
    cell_spec.budgets.assign(m, 0.0);
    for (std::size_t l = 0; l < m; ++l) {
      cell_spec.budgets[l] = config.base_fraction * v_max_hat[l];
    }
    cell_spec.budgets[config.constraint] = result.budgets[k];

    for (std::size_t a = 0; a < n_algos; ++a) {
      const Algorithm algo = config.algorithms[a];
      ThresholdSet ts;
      switch (algo) {
        case Algorithm::base:
          ts = multirisk_base(split.calib, cell_spec);
          break;
        case Algorithm::multirisk:
          ts = multirisk(split.calib, cell_spec, split.bounds);
          break;
        case Algorithm::conformal_m1:
          ts = conformal_m1(split.calib, cell_spec, split.bounds);
          break;
        case Algorithm::ltt: {
          LttConfig ltt = config.ltt;
          ltt.budgets_tilde =
              convert_budgets(cell_spec.budgets, ltt.delta, v_max_hat);
          ts = ltt_select(split.calib, cell_spec, ltt);
          break;
        }
      }
      const RiskReport report =
          evaluate_test_risks(ts, split.test, cell_spec, split.bounds);
      const std::size_t cell = k * n_algos + a;
      double* slot = &values[(cell * config.n_splits + s) * (m + 1)];
      slot[0] = report.objective_risk;
      for (std::size_t j = 0; j < m; ++j) slot[1 + j] = report.constraints[j].risk;
    }
  });

  const double dS = static_cast<double>(config.n_splits);
  for (std::size_t k = 0; k < config.n_budgets; ++k) {
    for (std::size_t a = 0; a < n_algos; ++a) {
      const std::size_t cell = k * n_algos + a;
      SweepCell out;
      out.budget = result.budgets[k];
      out.algorithm = config.algorithms[a];
      out.risks.assign(m, 0.0);
      out.ses.assign(m, 0.0);
      for (std::size_t q = 0; q <= m; ++q) {
        double sum = 0.0;
        for (std::size_t s = 0; s < config.n_splits; ++s) {
          sum += values[(cell * config.n_splits + s) * (m + 1) + q];
        }
        const double mean = sum / dS;
        double se = 0.0;
        if (config.n_splits > 1) {
          double ss = 0.0;
          for (std::size_t s = 0; s < config.n_splits; ++s) {
            const double d = values[(cell * config.n_splits + s) * (m + 1) + q] - mean;
            ss += d * d;
          }
          se = std::sqrt(ss / (dS - 1.0)) / std::sqrt(dS);
        }
        if (q == 0) {
          out.objective_risk = mean;
          out.objective_se = se;
        } else {
          out.risks[q - 1] = mean;
          out.ses[q - 1] = se;
        }
      }
      result.cells.push_back(std::move(out));
    }
  }
  return result;
}

}  // namespace riskgate
