#include "riskgate/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "riskgate/rng.hpp"
#include "riskgate/threading.hpp"

namespace riskgate {

void MixtureConfig::validate() const {
  if (m < 1) throw ValidationError("mixture config: m must be >= 1");
  if (v_max.size() != m || p.size() != m || budgets.size() != m) {
    throw ValidationError("mixture config: v_max, p and budgets must have length m");
  }
  if (n_cal < 1) throw ValidationError("mixture config: n_cal must be >= 1");
  for (std::size_t j = 0; j < m; ++j) {
    if (!(p[j] > 0.0 && p[j] < 1.0)) {
      throw ValidationError("mixture config: p must lie in (0,1)");
    }
    if (!(v_max[j] > 1.0)) {
      throw ValidationError("mixture config: v_max must exceed 1");
    }
    if (!(budgets[j] >= 0.0)) {
      throw ValidationError("mixture config: budgets must be >= 0");
    }
  }
}

BudgetSpec MixtureConfig::budget_spec() const {
  BudgetSpec spec;
  spec.budgets = budgets;
  spec.domains.reserve(m);
  for (std::size_t j = 0; j < m; ++j) spec.domains.push_back({0.0, v_max[j]});
  return spec;
}

CostBounds MixtureConfig::cost_bounds() const {
  CostBounds bounds;
  bounds.v_min.assign(m, 0.0);
  bounds.v_max = v_max;
  return bounds;
}

CalibrationSet gen_mixture(const MixtureConfig& config, std::uint64_t batch_index) {
  config.validate();
  CalibrationSet data;
  data.n = config.n_cal;
  data.m = config.m;
  data.scores.assign(config.m, std::vector<double>(config.n_cal));
  data.costs.assign(config.m, std::vector<double>(config.n_cal));
  data.objective_costs.assign(config.n_cal, 1.0);
  for (std::size_t j = 0; j < config.m; ++j) {
    for (std::size_t i = 0; i < config.n_cal; ++i) {
      const double coin = rng::uniform(config.seed, batch_index, i, j, 0);
      const double s = coin < config.p[j]
                           ? config.v_max[j]
                           : rng::uniform(config.seed, batch_index, i, j, 1);
      data.scores[j][i] = s;
      data.costs[j][i] = s;  // V_j = S_j
    }
  }
  return data;
}

CalibrationSet gen_uniform_iid(std::size_t m, std::size_t n, std::uint64_t seed,
                               std::uint64_t batch_index) {
  if (m < 1 || n < 1) throw ValidationError("gen_uniform_iid requires m, n >= 1");
  CalibrationSet data;
  data.n = n;
  data.m = m;
  data.scores.assign(m, std::vector<double>(n));
  data.costs.assign(m, std::vector<double>(n, 1.0));
  data.objective_costs.assign(n, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      data.scores[j][i] = rng::uniform(seed, batch_index, i, j, 0);
    }
  }
  return data;
}

namespace {

double clamp_unit(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

// P(S_j <= lambda) under the mixture.
double mixture_pass(const MixtureConfig& c, std::size_t j, double lambda) {
  return (1.0 - c.p[j]) * clamp_unit(lambda) +
         (lambda >= c.v_max[j] ? c.p[j] : 0.0);
}

// E[V_j I(S_j > lambda)] under the mixture (V_j = S_j).
double mixture_exceed_cost(const MixtureConfig& c, std::size_t j, double lambda) {
  const double u = clamp_unit(lambda);
  return (lambda < c.v_max[j] ? c.p[j] * c.v_max[j] : 0.0) +
         (1.0 - c.p[j]) * (1.0 - u * u) / 2.0;
}

}  // namespace

std::vector<double> population_risk_mixture(std::span<const double> thresholds,
                                            const MixtureConfig& config) {
  if (thresholds.size() != config.m) {
    throw ValidationError("population_risk_mixture: thresholds must have length m");
  }
  std::vector<double> risks(config.m);
  double pass = 1.0;
  for (std::size_t j = 0; j < config.m; ++j) {
    risks[j] = pass * mixture_exceed_cost(config, j, thresholds[j]);
    pass *= mixture_pass(config, j, thresholds[j]);
  }
  return risks;
}

double population_objective_mixture(std::span<const double> thresholds,
                                    const MixtureConfig& config) {
  double pass = 1.0;
  for (std::size_t j = 0; j < config.m; ++j) {
    pass *= mixture_pass(config, j, thresholds[j]);
  }
  return pass;  // objective cost is 1
}

std::vector<double> population_risk_uniform(std::span<const double> thresholds) {
  std::vector<double> risks(thresholds.size());
  double pass = 1.0;
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    const double u = clamp_unit(thresholds[j]);
    risks[j] = pass * (1.0 - u);
    pass *= u;
  }
  return risks;
}

double population_objective_uniform(std::span<const double> thresholds) {
  double pass = 1.0;
  for (double t : thresholds) pass *= clamp_unit(t);
  return pass;
}

MixturePopulation::MixturePopulation(MixtureConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

double MixturePopulation::constraint_risk(std::span<const double> prefix,
                                          double lambda) const {
  const std::size_t j = prefix.size();
  if (j >= config_.m) throw ValidationError("constraint index out of range");
  double pass = 1.0;
  for (std::size_t l = 0; l < j; ++l) pass *= mixture_pass(config_, l, prefix[l]);
  return pass * mixture_exceed_cost(config_, j, lambda);
}

double UniformPopulation::constraint_risk(std::span<const double> prefix,
                                          double lambda) const {
  if (prefix.size() >= m_) throw ValidationError("constraint index out of range");
  double pass = 1.0;
  for (double t : prefix) pass *= clamp_unit(t);
  return pass * (1.0 - clamp_unit(lambda));
}

std::vector<double> population_minimizer(const PopulationModel& model,
                                         const BudgetSpec& spec) {
  spec.validate();
  if (spec.size() != model.dim()) {
    throw ValidationError("population_minimizer: spec does not match model");
  }
  constexpr double kTol = 1e-10;
  std::vector<double> out;
  out.reserve(model.dim());
  for (std::size_t j = 0; j < model.dim(); ++j) {
    const Interval dom = spec.domains[j];
    const double beta = spec.budgets[j];
    const auto risk = [&](double lam) { return model.constraint_risk(out, lam); };
    double lo = dom.lo, hi = dom.hi;
    if (risk(lo) <= beta) {
      out.push_back(lo);  // the super-level set {g > beta} is empty
      continue;
    }
    if (risk(hi) > beta) {
      out.push_back(hi);  // never crosses: conventional endpoint
      continue;
    }
    // Invariant: risk(lo) > beta >= risk(hi).
    while (hi - lo > kTol) {
      const double mid = 0.5 * (lo + hi);
      if (risk(mid) <= beta) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.push_back(hi);
  }
  return out;
}

MonteCarloReport monte_carlo_run(const MixtureConfig& config,
                                 std::span<const Algorithm> algorithms,
                                 std::size_t n_batches) {
  config.validate();
  if (n_batches < 1) throw ValidationError("monte_carlo_run requires n_batches >= 1");
  if (algorithms.empty()) throw ValidationError("monte_carlo_run requires an algorithm");
  for (Algorithm a : algorithms) {
    if (a == Algorithm::ltt) {
      throw ValidationError("monte_carlo_run supports base, multirisk and conformal_m1");
    }
    if (a == Algorithm::conformal_m1 && config.m != 1) {
      throw ValidationError("conformal_m1 requires m = 1");
    }
  }

  const BudgetSpec spec = config.budget_spec();
  const CostBounds bounds = config.cost_bounds();
  const std::size_t n_algos = algorithms.size();
  DomainGrids grids;
  const DomainGrids* grids_ptr = nullptr;
  if (config.lambda_grid > 0) {
    grids = uniform_domain_grids(spec, config.lambda_grid);
    grids_ptr = &grids;
  }

  // risks[(a*m + j)*n_batches + b]
  std::vector<double> risks(n_algos * config.m * n_batches);
  parallel_for(n_batches, [&](std::size_t b) {
    const CalibrationSet data = gen_mixture(config, b);
    for (std::size_t a = 0; a < n_algos; ++a) {
      ThresholdSet ts;
      switch (algorithms[a]) {
        case Algorithm::base: ts = multirisk_base(data, spec, grids_ptr); break;
        case Algorithm::multirisk:
          ts = multirisk(data, spec, bounds, grids_ptr);
          break;
        default: ts = conformal_m1(data, spec, bounds); break;
      }
      const auto r = population_risk_mixture(ts.thresholds, config);
      for (std::size_t j = 0; j < config.m; ++j) {
        risks[(a * config.m + j) * n_batches + b] = r[j];
      }
    }
  });

  MonteCarloReport report;
  report.n_batches = n_batches;
  report.degenerate = n_batches == 1;
  const double dB = static_cast<double>(n_batches);
  for (std::size_t a = 0; a < n_algos; ++a) {
    MonteCarloReport::AlgoStats stats;
    stats.algorithm = algorithms[a];
    for (std::size_t j = 0; j < config.m; ++j) {
      const double* cell = &risks[(a * config.m + j) * n_batches];
      double sum = 0.0;
      for (std::size_t b = 0; b < n_batches; ++b) sum += cell[b];
      const double mean = sum / dB;
      double se = 0.0;
      if (n_batches > 1) {
        double ss = 0.0;
        for (std::size_t b = 0; b < n_batches; ++b) {
          const double d = cell[b] - mean;
          ss += d * d;
        }
        se = std::sqrt(ss / (dB - 1.0)) / std::sqrt(dB);
      }
      stats.mean.push_back(mean);
      stats.se.push_back(se);
    }
    report.results.push_back(std::move(stats));
  }
  return report;
}

void TwoPointConfig::validate() const {
  if (m < 1) throw ValidationError("two-point config: m must be >= 1");
  if (!(lo < hi)) throw ValidationError("two-point config: lo must be < hi");
  if (!(p_hi > 0.0 && p_hi < 1.0)) {
    throw ValidationError("two-point config: p_hi must lie in (0,1)");
  }
  if (budgets.size() != m) {
    throw ValidationError("two-point config: budgets must have length m");
  }
  if (!(domain.lo <= lo && hi <= domain.hi)) {
    throw ValidationError("two-point config: support must lie inside the domain");
  }
}

BudgetSpec TwoPointConfig::budget_spec() const {
  BudgetSpec spec;
  spec.budgets = budgets;
  spec.domains.assign(m, domain);
  return spec;
}

CostBounds TwoPointConfig::cost_bounds() const {
  CostBounds bounds;
  bounds.v_min.assign(m, 1.0);
  bounds.v_max.assign(m, 1.0);
  return bounds;
}

CalibrationSet gen_two_point(const TwoPointConfig& config, std::size_t n,
                             std::uint64_t batch_index) {
  config.validate();
  if (n < 1) throw ValidationError("gen_two_point requires n >= 1");
  CalibrationSet data;
  data.n = n;
  data.m = config.m;
  data.scores.assign(config.m, std::vector<double>(n));
  data.costs.assign(config.m, std::vector<double>(n, 1.0));
  data.objective_costs.assign(n, 1.0);
  for (std::size_t j = 0; j < config.m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double coin = rng::uniform(config.seed, batch_index, i, j, 0);
      data.scores[j][i] = coin < config.p_hi ? config.hi : config.lo;
    }
  }
  return data;
}

namespace {

// P(S <= lambda) for the two-point distribution.
double two_point_pass(const TwoPointConfig& c, double lambda) {
  if (lambda < c.lo) return 0.0;
  if (lambda < c.hi) return 1.0 - c.p_hi;
  return 1.0;
}

}  // namespace

std::vector<double> two_point_population_minimizer(const TwoPointConfig& config) {
  config.validate();
  std::vector<double> out;
  out.reserve(config.m);
  double pass = 1.0;  // Π P(S <= λ*_l) over selected prefix
  for (std::size_t j = 0; j < config.m; ++j) {
    const double beta = config.budgets[j];

    // Range of the population risk g_j^*: its value on each plateau.
    const double below = pass * 1.0;                  // λ < lo
    const double mid = pass * config.p_hi;            // lo <= λ < hi
    const double top = 0.0;                           // λ >= hi
    for (double v : {below, mid, top}) {
      if (std::abs(beta - v) < 1e-12) {
        throw ValidationError(
            "two-point consistency check: budget " + std::to_string(j + 1) +
            " coincides with a value of the population risk "
            "(non-degenerate risk levels required)");
      }
    }

    const double candidates[] = {config.domain.lo, config.lo, config.hi,
                                 config.domain.hi};
    double chosen = config.domain.hi;
    bool found = false;
    for (double c : candidates) {
      if (!config.domain.contains(c)) continue;
      const double risk = pass * (1.0 - two_point_pass(config, c));
      if (risk <= beta) {
        chosen = c;
        found = true;
        break;
      }
    }
    (void)found;  // never crossing maps to the domain maximum by convention
    out.push_back(chosen);
    pass *= two_point_pass(config, chosen);
  }
  return out;
}

std::vector<ConsistencyRow> consistency_check_discrete(
    std::span<const std::size_t> n_list, const TwoPointConfig& config,
    std::size_t trials) {
  config.validate();
  if (trials < 1) throw ValidationError("consistency check requires trials >= 1");
  const std::vector<double> minimizer = two_point_population_minimizer(config);
  const BudgetSpec spec = config.budget_spec();
  const CostBounds bounds = config.cost_bounds();

  std::vector<ConsistencyRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t n : n_list) {
    std::vector<std::uint8_t> hit(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
      const CalibrationSet data = gen_two_point(config, n, t);
      const ThresholdSet ts = multirisk(data, spec, bounds);
      hit[t] = ts.thresholds == minimizer ? 1 : 0;
    });
    std::size_t count = 0;
    for (std::uint8_t h : hit) count += h;
    rows.push_back({n, static_cast<double>(count) / static_cast<double>(trials)});
  }
  return rows;
}

}  // namespace riskgate
