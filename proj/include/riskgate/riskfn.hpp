#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riskgate/dataset.hpp"
#include "riskgate/types.hpp"

namespace riskgate {

enum class RiskVariant { empirical, bumped, symmetric };

/// One constraint's risk as a function of its own threshold, with the prefix
/// thresholds frozen. The function is a non-increasing, right-continuous step
/// function whose jumps sit at the scores of the rows passing the prefix
/// filter; we precompute the sorted jump points and tail cost sums so that
/// evaluation is O(log n).
///
/// Variants:
///   empirical  — mean loss over the n rows (denominator n)
///   bumped     — denominator n+1 plus a v_max/(n+1) surrogate for the unseen
///                test loss
///   symmetric  — mean over rows that already include the test point
///                (denominator = row count); a testing/simulation device
///
/// Immutable after construction; evaluation and inversion are pure.
class RiskFunction {
public:
  RiskFunction(const CalibrationSet& data, std::size_t j,
               std::span<const double> prefix_thresholds, RiskVariant variant,
               double v_max = 0.0);

  /// Risk at lambda.
  double operator()(double lambda) const;

  RiskVariant variant() const { return variant_; }
  std::size_t constraint_index() const { return j_; }
  std::size_t active_count() const { return active_count_; }
  std::span<const double> jump_points() const { return jumps_; }

  struct Crossing {
    double lambda;
    bool found;  // false when the risk exceeds beta on the entire domain
  };
  /// First point of the domain where the risk is <= beta. Because the
  /// function is right-continuous and non-increasing with jumps only at
  /// jump_points(), the infimum of {lambda : risk <= beta} is attained at
  /// the domain's lower endpoint or at a jump point; when the risk never
  /// drops to beta the conventional value is the upper endpoint.
  Crossing crossing(double beta, Interval domain) const;

  /// Same search restricted to a sorted finite grid (the infimum becomes a
  /// minimum); grid points outside the domain are ignored, and the empty-set
  /// convention still returns the domain's upper endpoint. A grid containing
  /// every jump point reproduces the exact crossing.
  Crossing crossing(double beta, Interval domain,
                    std::span<const double> grid) const;

private:
  std::size_t j_;
  RiskVariant variant_;
  double denom_;
  double bump_;
  std::size_t active_count_;
  double total_active_cost_;
  std::vector<double> jumps_;      // sorted distinct scores of active rows
  std::vector<double> tail_sums_;  // tail_sums_[k] = Σ cost over active rows with score > jumps_[k]
};

/// Generalized inverse of the empirical risk: inf{λ ∈ domain : g(λ) ≤ β},
/// with the infimum of the empty set taken to be domain.hi.
double gen_inverse_base(const RiskFunction& f, double beta, Interval domain);

/// Same convention applied to the bumped risk.
double gen_inverse_bumped(const RiskFunction& f, double beta, Interval domain);

/// sup{λ ∈ domain : g_sym(λ) > β}, with the supremum of the empty set taken
/// to be domain.lo. For a right-continuous non-increasing step function this
/// supremum equals the crossing point inf{λ : g_sym(λ) ≤ β}, which is how it
/// is computed.
double gen_inverse_sym(const RiskFunction& f, double beta, Interval domain);

/// Sorted, de-duplicated {domain.lo, domain.hi} ∪ (scores ∩ domain).
std::vector<double> candidate_points(std::span<const double> scores_j,
                                     Interval domain);

}  // namespace riskgate
