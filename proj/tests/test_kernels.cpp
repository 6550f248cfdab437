#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "riskgate/kernels.hpp"

using namespace riskgate;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<double> costs;
  std::vector<std::uint8_t> mask;
  double lambda;
};

Instance random_instance(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::bernoulli_distribution coin(0.6);
  Instance inst;
  inst.scores.resize(n);
  inst.costs.resize(n);
  inst.mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.scores[i] = val(gen);
    inst.costs[i] = std::abs(val(gen));
    inst.mask[i] = coin(gen) ? 1 : 0;
  }
  inst.lambda = val(gen);
  return inst;
}

}  // namespace

TEST_CASE("scalar kernels match a naive loop") {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + gen() % 40;
    Instance inst = random_instance(gen, n);

    double want_sum = 0.0, want_sumsq = 0.0, want_masked = 0.0;
    std::size_t want_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      want_count += inst.mask[i] != 0;
      if (inst.mask[i]) want_masked += inst.costs[i];
      if (inst.mask[i] && inst.scores[i] > inst.lambda) {
        want_sum += inst.costs[i];
        want_sumsq += inst.costs[i] * inst.costs[i];
      }
    }

    CHECK(kernels::scalar::mask_count(inst.mask) == want_count);
    CHECK(kernels::scalar::masked_sum(inst.costs, inst.mask) ==
          doctest::Approx(want_masked).epsilon(1e-12));
    CHECK(kernels::scalar::exceed_cost_sum(inst.scores, inst.costs, inst.mask,
                                           inst.lambda) ==
          doctest::Approx(want_sum).epsilon(1e-12));
    double s = 0.0, s2 = 0.0;
    kernels::scalar::exceed_cost_moments(inst.scores, inst.costs, inst.mask,
                                         inst.lambda, &s, &s2);
    CHECK(s == doctest::Approx(want_sum).epsilon(1e-12));
    CHECK(s2 == doctest::Approx(want_sumsq).epsilon(1e-12));

    auto mask = inst.mask;
    kernels::scalar::mask_and_le(inst.scores, inst.lambda, mask);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(mask[i] == (inst.mask[i] && inst.scores[i] <= inst.lambda ? 1 : 0));
    }
  }
}

#if RISKGATE_HAVE_AVX2
TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (!kernels::backend_available(kernels::Backend::avx2)) return;
  std::mt19937_64 gen(17);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = gen() % 70;  // exercises empty inputs and all tails
    Instance inst = random_instance(gen, n);

    CHECK(kernels::avx2::mask_count(inst.mask) ==
          kernels::scalar::mask_count(inst.mask));
    // operator== on purpose: the backends share the accumulation order.
    CHECK(kernels::avx2::masked_sum(inst.costs, inst.mask) ==
          kernels::scalar::masked_sum(inst.costs, inst.mask));
    CHECK(kernels::avx2::exceed_cost_sum(inst.scores, inst.costs, inst.mask,
                                         inst.lambda) ==
          kernels::scalar::exceed_cost_sum(inst.scores, inst.costs, inst.mask,
                                           inst.lambda));
    double as = 0.0, as2 = 0.0, bs = 0.0, bs2 = 0.0;
    kernels::avx2::exceed_cost_moments(inst.scores, inst.costs, inst.mask,
                                       inst.lambda, &as, &as2);
    kernels::scalar::exceed_cost_moments(inst.scores, inst.costs, inst.mask,
                                         inst.lambda, &bs, &bs2);
    CHECK(as == bs);
    CHECK(as2 == bs2);

    kernels::avx2::vec_moments(inst.costs, &as, &as2);
    kernels::scalar::vec_moments(inst.costs, &bs, &bs2);
    CHECK(as == bs);
    CHECK(as2 == bs2);

    auto mask_a = inst.mask;
    auto mask_b = inst.mask;
    kernels::avx2::mask_and_le(inst.scores, inst.lambda, mask_a);
    kernels::scalar::mask_and_le(inst.scores, inst.lambda, mask_b);
    CHECK(mask_a == mask_b);
  }
}
#endif

TEST_CASE("moment route matches the materialized loss vector bitwise") {
  std::mt19937_64 gen(23);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + gen() % 50;
    Instance inst = random_instance(gen, n);
    std::vector<double> losses(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.mask[i] && inst.scores[i] > inst.lambda) losses[i] = inst.costs[i];
    }
    double as = 0.0, as2 = 0.0, bs = 0.0, bs2 = 0.0;
    kernels::exceed_cost_moments(inst.scores, inst.costs, inst.mask, inst.lambda,
                                 &as, &as2);
    kernels::vec_moments(losses, &bs, &bs2);
    CHECK(as == bs);
    CHECK(as2 == bs2);
  }
}

TEST_CASE("backend selection") {
  const auto original = kernels::active_backend();
  CHECK(kernels::backend_available(kernels::Backend::scalar));
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  kernels::set_backend(original);
  CHECK(std::string(kernels::backend_name(kernels::Backend::scalar)) == "scalar");
}
