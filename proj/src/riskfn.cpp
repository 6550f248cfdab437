#include "riskgate/riskfn.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

#include "riskgate/kernels.hpp"

namespace riskgate {

RiskFunction::RiskFunction(const CalibrationSet& data, std::size_t j,
                           std::span<const double> prefix_thresholds,
                           RiskVariant variant, double v_max)
    : j_(j), variant_(variant) {
  if (j >= data.m) throw ValidationError("constraint index out of range");
  if (prefix_thresholds.size() != j) {
    throw ValidationError("expected " + std::to_string(j) +
                          " prefix thresholds, got " +
                          std::to_string(prefix_thresholds.size()));
  }

  const std::size_t n = data.n;
  denom_ = variant == RiskVariant::bumped ? static_cast<double>(n + 1)
                                          : static_cast<double>(n);
  bump_ = variant == RiskVariant::bumped ? v_max / static_cast<double>(n + 1) : 0.0;

  std::vector<std::uint8_t> mask(n, 1);
  for (std::size_t l = 0; l < j; ++l) {
    kernels::mask_and_le(data.score_column(l), prefix_thresholds[l], mask);
  }

  std::vector<std::pair<double, double>> active;  // (score, cost)
  active.reserve(n);
  const auto& sj = data.scores[j];
  const auto& vj = data.costs[j];
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) active.emplace_back(sj[i], vj[i]);
  }
  active_count_ = active.size();
  std::sort(active.begin(), active.end());

  // Collapse tied scores; the step at a tied point aggregates all tied costs.
  jumps_.reserve(active.size());
  std::vector<double> step_cost;
  step_cost.reserve(active.size());
  for (const auto& [s, v] : active) {
    if (jumps_.empty() || jumps_.back() != s) {
      jumps_.push_back(s);
      step_cost.push_back(v);
    } else {
      step_cost.back() += v;
    }
  }

  // tail_sums_[k] = Σ cost over active rows with score strictly above jumps_[k].
  tail_sums_.assign(jumps_.size(), 0.0);
  double tail = 0.0;
  for (std::size_t k = jumps_.size(); k-- > 0;) {
    tail_sums_[k] = tail;
    tail += step_cost[k];
  }
  total_active_cost_ = tail;
}

double RiskFunction::operator()(double lambda) const {
  // Costs counted are those of active rows with score > lambda.
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), lambda);
  const double tail =
      it == jumps_.begin() ? total_active_cost_ : tail_sums_[it - jumps_.begin() - 1];
  return tail / denom_ + bump_;
}

RiskFunction::Crossing RiskFunction::crossing(double beta, Interval domain) const {
  if ((*this)(domain.lo) <= beta) return {domain.lo, true};
  // Jumps within (lo, hi]; the value between jumps is the value at the jump
  // on the left, so scanning jump points is exact.
  const auto first = std::upper_bound(jumps_.begin(), jumps_.end(), domain.lo);
  const auto last = std::upper_bound(jumps_.begin(), jumps_.end(), domain.hi);
  // The risk is non-increasing, so the qualifying jumps form a suffix.
  const auto it = std::partition_point(
      first, last, [&](double s) { return (*this)(s) > beta; });
  if (it != last) return {*it, true};
  return {domain.hi, false};
}

RiskFunction::Crossing RiskFunction::crossing(double beta, Interval domain,
                                              std::span<const double> grid) const {
  const auto first =
      std::lower_bound(grid.begin(), grid.end(), domain.lo);
  const auto last = std::upper_bound(first, grid.end(), domain.hi);
  const auto it = std::partition_point(
      first, last, [&](double s) { return (*this)(s) > beta; });
  if (it != last) return {*it, true};
  return {domain.hi, false};
}

namespace {

double inf_style_inverse(const RiskFunction& f, double beta, Interval domain) {
  return f.crossing(beta, domain).lambda;
}

}  // namespace

double gen_inverse_base(const RiskFunction& f, double beta, Interval domain) {
  if (f.variant() != RiskVariant::empirical) {
    throw ValidationError("gen_inverse_base requires the empirical variant");
  }
  return inf_style_inverse(f, beta, domain);
}

double gen_inverse_bumped(const RiskFunction& f, double beta, Interval domain) {
  if (f.variant() != RiskVariant::bumped) {
    throw ValidationError("gen_inverse_bumped requires the bumped variant");
  }
  return inf_style_inverse(f, beta, domain);
}

double gen_inverse_sym(const RiskFunction& f, double beta, Interval domain) {
  if (f.variant() != RiskVariant::symmetric) {
    throw ValidationError("gen_inverse_sym requires the symmetric variant");
  }
  // sup{λ : g > β} coincides with the crossing point inf{λ : g ≤ β} for a
  // right-continuous non-increasing step function, including both empty-set
  // conventions (all-≤ ⇒ lo, never-≤ ⇒ hi).
  return inf_style_inverse(f, beta, domain);
}

std::vector<double> candidate_points(std::span<const double> scores_j,
                                     Interval domain) {
  std::vector<double> pts;
  pts.reserve(scores_j.size() + 2);
  pts.push_back(domain.lo);
  for (double s : scores_j) {
    if (s >= domain.lo && s <= domain.hi) pts.push_back(s);
  }
  pts.push_back(domain.hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace riskgate
