#include "riskgate/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "riskgate/types.hpp"

namespace riskgate::kernels {

namespace scalar {

void mask_and_le(std::span<const double> scores, double lambda,
                 std::span<std::uint8_t> mask) {
  const std::size_t n = scores.size();
  for (std::size_t i = 0; i < n; ++i) {
    mask[i] = static_cast<std::uint8_t>(mask[i] & (scores[i] <= lambda ? 1u : 0u));
  }
}

std::size_t mask_count(std::span<const std::uint8_t> mask) {
  std::size_t c = 0;
  for (std::uint8_t b : mask) c += b != 0;
  return c;
}

double masked_sum(std::span<const double> values,
                  std::span<const std::uint8_t> mask) {
  const std::size_t n = values.size();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      acc[k] += mask[i + k] ? values[i + k] : 0.0;
    }
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += mask[i] ? values[i] : 0.0;
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

double exceed_cost_sum(std::span<const double> scores,
                       std::span<const double> costs,
                       std::span<const std::uint8_t> mask, double lambda) {
  const std::size_t n = scores.size();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const bool sel = mask[i + k] && scores[i + k] > lambda;
      acc[k] += sel ? costs[i + k] : 0.0;
    }
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const bool sel = mask[i] && scores[i] > lambda;
    tail += sel ? costs[i] : 0.0;
  }
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

void exceed_cost_moments(std::span<const double> scores,
                         std::span<const double> costs,
                         std::span<const std::uint8_t> mask, double lambda,
                         double* sum, double* sum_sq) {
  const std::size_t n = scores.size();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  double acc2[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const bool sel = mask[i + k] && scores[i + k] > lambda;
      const double x = sel ? costs[i + k] : 0.0;
      acc[k] += x;
      acc2[k] += x * x;
    }
  }
  double tail = 0.0, tail2 = 0.0;
  for (; i < n; ++i) {
    const bool sel = mask[i] && scores[i] > lambda;
    const double x = sel ? costs[i] : 0.0;
    tail += x;
    tail2 += x * x;
  }
  *sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
  *sum_sq = ((acc2[0] + acc2[1]) + (acc2[2] + acc2[3])) + tail2;
}

void vec_moments(std::span<const double> values, double* sum, double* sum_sq) {
  const std::size_t n = values.size();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  double acc2[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double x = values[i + k];
      acc[k] += x;
      acc2[k] += x * x;
    }
  }
  double tail = 0.0, tail2 = 0.0;
  for (; i < n; ++i) {
    tail += values[i];
    tail2 += values[i] * values[i];
  }
  *sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
  *sum_sq = ((acc2[0] + acc2[1]) + (acc2[2] + acc2[3])) + tail2;
}

}  // namespace scalar

namespace {

Backend detect_backend() {
  // RISKGATE_SIMD=scalar forces the reference path.
  if (const char* force = std::getenv("RISKGATE_SIMD")) {
    if (std::strcmp(force, "scalar") == 0) return Backend::scalar;
  }
#if RISKGATE_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
#if RISKGATE_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw ValidationError("kernel backend not available on this host");
  }
  g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void mask_and_le(std::span<const double> scores, double lambda,
                 std::span<std::uint8_t> mask) {
#if RISKGATE_HAVE_AVX2
  if (active_backend() == Backend::avx2) return avx2::mask_and_le(scores, lambda, mask);
#endif
  scalar::mask_and_le(scores, lambda, mask);
}

std::size_t mask_count(std::span<const std::uint8_t> mask) {
#if RISKGATE_HAVE_AVX2
  if (active_backend() == Backend::avx2) return avx2::mask_count(mask);
#endif
  return scalar::mask_count(mask);
}

double masked_sum(std::span<const double> values,
                  std::span<const std::uint8_t> mask) {
#if RISKGATE_HAVE_AVX2
  if (active_backend() == Backend::avx2) return avx2::masked_sum(values, mask);
#endif
  return scalar::masked_sum(values, mask);
}

double exceed_cost_sum(std::span<const double> scores,
                       std::span<const double> costs,
                       std::span<const std::uint8_t> mask, double lambda) {
#if RISKGATE_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    return avx2::exceed_cost_sum(scores, costs, mask, lambda);
  }
#endif
  return scalar::exceed_cost_sum(scores, costs, mask, lambda);
}

void exceed_cost_moments(std::span<const double> scores,
                         std::span<const double> costs,
                         std::span<const std::uint8_t> mask, double lambda,
                         double* sum, double* sum_sq) {
#if RISKGATE_HAVE_AVX2
  if (active_backend() == Backend::avx2) {
    return avx2::exceed_cost_moments(scores, costs, mask, lambda, sum, sum_sq);
  }
#endif
  scalar::exceed_cost_moments(scores, costs, mask, lambda, sum, sum_sq);
}

void vec_moments(std::span<const double> values, double* sum, double* sum_sq) {
#if RISKGATE_HAVE_AVX2
  if (active_backend() == Backend::avx2) return avx2::vec_moments(values, sum, sum_sq);
#endif
  scalar::vec_moments(values, sum, sum_sq);
}

}  // namespace riskgate::kernels
