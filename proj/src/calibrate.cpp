#include "riskgate/calibrate.hpp"

#include <algorithm>

namespace riskgate {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::base: return "base";
    case Algorithm::multirisk: return "multirisk";
    case Algorithm::conformal_m1: return "conformal_m1";
    case Algorithm::ltt: return "ltt";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "base") return Algorithm::base;
  if (name == "multirisk") return Algorithm::multirisk;
  if (name == "conformal_m1") return Algorithm::conformal_m1;
  if (name == "ltt") return Algorithm::ltt;
  throw ValidationError("unknown algorithm '" + name +
                        "' (expected base, multirisk, conformal_m1 or ltt)");
}

namespace {

void check_shapes(const CalibrationSet& calib, const BudgetSpec& spec) {
  calib.validate();
  spec.validate();
  if (spec.size() != calib.m) {
    throw ValidationError("budget spec covers " + std::to_string(spec.size()) +
                          " constraints but data has " + std::to_string(calib.m));
  }
}

void check_costs_within_bounds(const CalibrationSet& calib, const CostBounds& bounds) {
  bounds.validate();
  if (bounds.size() != calib.m) {
    throw ValidationError("cost bounds cover " + std::to_string(bounds.size()) +
                          " constraints but data has " + std::to_string(calib.m));
  }
  for (std::size_t j = 0; j < calib.m; ++j) {
    for (std::size_t i = 0; i < calib.n; ++i) {
      const double v = calib.costs[j][i];
      if (v < bounds.v_min[j] || v > bounds.v_max[j]) {
        throw ValidationError("cost outside declared bounds in row " +
                              std::to_string(i + 1) + ", constraint " +
                              std::to_string(j + 1));
      }
    }
  }
}

}  // namespace

TightenedBudgets tighten_budgets(const BudgetSpec& spec, const CostBounds& bounds,
                                 std::size_t n) {
  TightenedBudgets tb;
  tb.base_budgets = spec.budgets;
  tb.deltas.reserve(spec.size());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    tb.deltas.push_back((bounds.v_max[j] - bounds.v_min[j]) /
                        static_cast<double>(n + 1));
  }
  return tb;
}

DomainGrids uniform_domain_grids(const BudgetSpec& spec, std::size_t points_per_dim) {
  if (points_per_dim < 2) {
    throw ValidationError("domain grids need at least 2 points per dimension");
  }
  DomainGrids grids(spec.size());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const Interval dom = spec.domains[j];
    grids[j].reserve(points_per_dim);
    for (std::size_t t = 0; t < points_per_dim; ++t) {
      grids[j].push_back(dom.lo + (dom.hi - dom.lo) * static_cast<double>(t) /
                                      static_cast<double>(points_per_dim - 1));
    }
  }
  return grids;
}

namespace {

RiskFunction::Crossing cross_domain(const RiskFunction& g, double beta,
                                    Interval domain, const DomainGrids* grids,
                                    std::size_t j) {
  if (grids && !(*grids)[j].empty()) return g.crossing(beta, domain, (*grids)[j]);
  return g.crossing(beta, domain);
}

}  // namespace

ThresholdSet multirisk_base(const CalibrationSet& calib, const BudgetSpec& spec,
                            const DomainGrids* grids) {
  check_shapes(calib, spec);
  if (grids && grids->size() != calib.m) {
    throw ValidationError("domain grids must cover all constraints");
  }

  ThresholdSet out;
  out.algorithm = Algorithm::base;
  out.n_calibration = calib.n;
  out.infeasible.assign(calib.m, 0);
  out.thresholds.reserve(calib.m);
  for (std::size_t j = 0; j < calib.m; ++j) {
    RiskFunction g(calib, j, out.thresholds, RiskVariant::empirical);
    const auto cross = cross_domain(g, spec.budgets[j], spec.domains[j], grids, j);
    out.thresholds.push_back(cross.lambda);
    out.infeasible[j] = !cross.found;
  }
  return out;
}

ThresholdSet multirisk(const CalibrationSet& calib, const BudgetSpec& spec,
                       const CostBounds& bounds, const DomainGrids* grids) {
  check_shapes(calib, spec);
  check_costs_within_bounds(calib, bounds);
  if (grids && grids->size() != calib.m) {
    throw ValidationError("domain grids must cover all constraints");
  }

  const std::size_t m = calib.m;
  const TightenedBudgets tb = tighten_budgets(spec, bounds, calib.n);

  ThresholdSet out;
  out.algorithm = Algorithm::multirisk;
  out.n_calibration = calib.n;
  out.infeasible.assign(m, 0);

  // Entry (j, 2k) inverts the bumped risk at budget β_j^(k-1) with the prefix
  // thresholds taken from column 2k+2; the table therefore fills along
  // increasing j, and the deployed thresholds are the 2k = 2 column.
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t k_count = m - j;  // k = 1..m-j+1 for 1-based j
    for (std::size_t k = 1; k <= k_count; ++k) {
      std::vector<double> prefix;
      prefix.reserve(j);
      for (std::size_t l = 0; l < j; ++l) {
        prefix.push_back(out.aux.at({l + 1, 2 * k + 2}));
      }
      RiskFunction g(calib, j, prefix, RiskVariant::bumped, bounds.v_max[j]);
      const auto cross =
          cross_domain(g, tb.budget(j, k - 1), spec.domains[j], grids, j);
      out.aux[{j + 1, 2 * k}] = cross.lambda;
      if (k == 1) out.infeasible[j] = !cross.found;
    }
  }

  out.thresholds.reserve(m);
  for (std::size_t j = 0; j < m; ++j) out.thresholds.push_back(out.aux.at({j + 1, 2}));
  return out;
}

ThresholdSet conformal_m1(const CalibrationSet& calib, const BudgetSpec& spec,
                          const CostBounds& bounds) {
  check_shapes(calib, spec);
  if (calib.m != 1) {
    throw ValidationError("conformal_m1 applies to single-constraint data");
  }
  check_costs_within_bounds(calib, bounds);

  const double n = static_cast<double>(calib.n);
  RiskFunction g(calib, 0, {}, RiskVariant::empirical);
  // Transformed budget: (n·g(λ) + v_max)/(n+1) ≤ β  ⇔  g(λ) ≤ ((n+1)β − v_max)/n.
  const double beta_eff = ((n + 1.0) * spec.budgets[0] - bounds.v_max[0]) / n;
  const auto cross = g.crossing(beta_eff, spec.domains[0]);

  ThresholdSet out;
  out.algorithm = Algorithm::conformal_m1;
  out.n_calibration = calib.n;
  out.thresholds = {cross.lambda};
  out.infeasible = {static_cast<std::uint8_t>(!cross.found)};
  return out;
}

double h_recursion(const CostBounds& bounds, std::size_t j, unsigned t) {
  bounds.validate();
  if (j >= bounds.size()) throw ValidationError("h_recursion: index out of range");
  for (std::size_t l = 0; l < j; ++l) {
    if (!(bounds.v_min[l] > 0.0)) {
      throw ValidationError(
          "h_recursion requires strictly positive v_min for constraints before " +
          std::to_string(j + 1) + " (costs must be bounded away from zero)");
    }
  }
  std::vector<double> h(j + 1, 0.0);
  for (std::size_t jj = 1; jj <= j; ++jj) {
    double sum = 0.0;
    for (std::size_t l = 0; l < jj; ++l) {
      sum += (static_cast<double>(t) * (bounds.v_max[l] - bounds.v_min[l]) +
              bounds.v_max[l] + h[l]) /
             bounds.v_min[l];
    }
    h[jj] = bounds.v_max[jj] * sum;
  }
  return h[j];
}

double lower_bound_slack(const CostBounds& bounds, std::size_t j, std::size_t n) {
  const double a =
      2.0 * bounds.v_max[j] - bounds.v_min[j] + h_recursion(bounds, j, 2);
  return a / static_cast<double>(n + 1);
}

}  // namespace riskgate
