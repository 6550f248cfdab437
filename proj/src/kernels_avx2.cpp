// AVX2 variants of the row kernels. Accumulation order matches the scalar
// reference (4 striped lanes, reduce ((l0+l1)+(l2+l3)) + scalar tail), so
// results are bit-identical across backends.

#include <immintrin.h>

#include <cstring>

#include "riskgate/kernels.hpp"

namespace riskgate::kernels::avx2 {

namespace {

// Expands 4 mask bytes (0/1) into a full-width double-lane mask.
inline __m256d load_mask4(const std::uint8_t* mask) {
  std::uint32_t packed;
  std::memcpy(&packed, mask, 4);
  const __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(packed));
  const __m256i lanes = _mm256_cvtepu8_epi64(bytes);
  const __m256i nonzero = _mm256_cmpgt_epi64(lanes, _mm256_setzero_si256());
  return _mm256_castsi256_pd(nonzero);
}

inline double reduce_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

void mask_and_le(std::span<const double> scores, double lambda,
                 std::span<std::uint8_t> mask) {
  const std::size_t n = scores.size();
  const __m256d vlam = _mm256_set1_pd(lambda);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(scores.data() + i);
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(s, vlam, _CMP_LE_OQ));
    mask[i] &= static_cast<std::uint8_t>(bits & 1);
    mask[i + 1] &= static_cast<std::uint8_t>((bits >> 1) & 1);
    mask[i + 2] &= static_cast<std::uint8_t>((bits >> 2) & 1);
    mask[i + 3] &= static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  for (; i < n; ++i) {
    mask[i] = static_cast<std::uint8_t>(mask[i] & (scores[i] <= lambda ? 1u : 0u));
  }
}

std::size_t mask_count(std::span<const std::uint8_t> mask) {
  const std::size_t n = mask.size();
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i bytes =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask.data() + i));
    const __m256i nz = _mm256_cmpgt_epi8(bytes, _mm256_setzero_si256());
    c += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_epi8(nz))));
  }
  for (; i < n; ++i) c += mask[i] != 0;
  return c;
}

double masked_sum(std::span<const double> values,
                  std::span<const std::uint8_t> mask) {
  const std::size_t n = values.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    acc = _mm256_add_pd(acc, _mm256_and_pd(v, load_mask4(mask.data() + i)));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += mask[i] ? values[i] : 0.0;
  return reduce_lanes(acc) + tail;
}

double exceed_cost_sum(std::span<const double> scores,
                       std::span<const double> costs,
                       std::span<const std::uint8_t> mask, double lambda) {
  const std::size_t n = scores.size();
  const __m256d vlam = _mm256_set1_pd(lambda);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(scores.data() + i);
    const __m256d v = _mm256_loadu_pd(costs.data() + i);
    const __m256d sel = _mm256_and_pd(_mm256_cmp_pd(s, vlam, _CMP_GT_OQ),
                                      load_mask4(mask.data() + i));
    acc = _mm256_add_pd(acc, _mm256_and_pd(v, sel));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const bool sel = mask[i] && scores[i] > lambda;
    tail += sel ? costs[i] : 0.0;
  }
  return reduce_lanes(acc) + tail;
}

void exceed_cost_moments(std::span<const double> scores,
                         std::span<const double> costs,
                         std::span<const std::uint8_t> mask, double lambda,
                         double* sum, double* sum_sq) {
  const std::size_t n = scores.size();
  const __m256d vlam = _mm256_set1_pd(lambda);
  __m256d acc = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(scores.data() + i);
    const __m256d v = _mm256_loadu_pd(costs.data() + i);
    const __m256d sel = _mm256_and_pd(_mm256_cmp_pd(s, vlam, _CMP_GT_OQ),
                                      load_mask4(mask.data() + i));
    const __m256d x = _mm256_and_pd(v, sel);
    acc = _mm256_add_pd(acc, x);
    acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(x, x));
  }
  double tail = 0.0, tail2 = 0.0;
  for (; i < n; ++i) {
    const bool sel = mask[i] && scores[i] > lambda;
    const double x = sel ? costs[i] : 0.0;
    tail += x;
    tail2 += x * x;
  }
  *sum = reduce_lanes(acc) + tail;
  *sum_sq = reduce_lanes(acc2) + tail2;
}

void vec_moments(std::span<const double> values, double* sum, double* sum_sq) {
  const std::size_t n = values.size();
  __m256d acc = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(values.data() + i);
    acc = _mm256_add_pd(acc, x);
    acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(x, x));
  }
  double tail = 0.0, tail2 = 0.0;
  for (; i < n; ++i) {
    tail += values[i];
    tail2 += values[i] * values[i];
  }
  *sum = reduce_lanes(acc) + tail;
  *sum_sq = reduce_lanes(acc2) + tail2;
}

}  // namespace riskgate::kernels::avx2
