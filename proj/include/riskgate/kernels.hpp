#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace riskgate::kernels {

/// Row-level primitives shared by risk-function construction, test-risk
/// evaluation and the LTT grid search. Every kernel has a scalar reference
/// implementation and (on x86-64) an AVX2 variant selected at runtime.
///
/// Both variants accumulate into four striped partial sums (lane k owns the
/// elements with index ≡ k mod 4) and reduce as ((l0+l1)+(l2+l3)) + tail, so
/// scalar and AVX2 results are bit-identical and the equivalence tests can
/// compare with operator==.

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
/// Test hook; throws ValidationError if the backend is not available.
void set_backend(Backend b);
const char* backend_name(Backend b);

/// mask[i] &= (scores[i] <= lambda)
void mask_and_le(std::span<const double> scores, double lambda,
                 std::span<std::uint8_t> mask);

std::size_t mask_count(std::span<const std::uint8_t> mask);

/// Σ values[i] over rows with mask[i] != 0.
double masked_sum(std::span<const double> values,
                  std::span<const std::uint8_t> mask);

/// Σ costs[i] over rows with mask[i] != 0 and scores[i] > lambda.
double exceed_cost_sum(std::span<const double> scores,
                       std::span<const double> costs,
                       std::span<const std::uint8_t> mask, double lambda);

/// First and second moments of the loss vector L_i = costs[i] when
/// (mask[i] && scores[i] > lambda), else 0. Feeds the CLT p-value.
void exceed_cost_moments(std::span<const double> scores,
                         std::span<const double> costs,
                         std::span<const std::uint8_t> mask, double lambda,
                         double* sum, double* sum_sq);

/// Moments of an already-materialized vector; striped identically to
/// exceed_cost_moments so the two routes agree bitwise.
void vec_moments(std::span<const double> values, double* sum, double* sum_sq);

// Explicit-backend entry points (used by the equivalence tests).
namespace scalar {
void mask_and_le(std::span<const double> scores, double lambda,
                 std::span<std::uint8_t> mask);
std::size_t mask_count(std::span<const std::uint8_t> mask);
double masked_sum(std::span<const double> values,
                  std::span<const std::uint8_t> mask);
double exceed_cost_sum(std::span<const double> scores,
                       std::span<const double> costs,
                       std::span<const std::uint8_t> mask, double lambda);
void exceed_cost_moments(std::span<const double> scores,
                         std::span<const double> costs,
                         std::span<const std::uint8_t> mask, double lambda,
                         double* sum, double* sum_sq);
void vec_moments(std::span<const double> values, double* sum, double* sum_sq);
}  // namespace scalar

#if RISKGATE_HAVE_AVX2
namespace avx2 {
void mask_and_le(std::span<const double> scores, double lambda,
                 std::span<std::uint8_t> mask);
std::size_t mask_count(std::span<const std::uint8_t> mask);
double masked_sum(std::span<const double> values,
                  std::span<const std::uint8_t> mask);
double exceed_cost_sum(std::span<const double> scores,
                       std::span<const double> costs,
                       std::span<const std::uint8_t> mask, double lambda);
void exceed_cost_moments(std::span<const double> scores,
                         std::span<const double> costs,
                         std::span<const std::uint8_t> mask, double lambda,
                         double* sum, double* sum_sq);
void vec_moments(std::span<const double> values, double* sum, double* sum_sq);
}  // namespace avx2
#endif

}  // namespace riskgate::kernels
