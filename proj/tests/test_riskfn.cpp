#include <doctest.h>

#include <random>
#include <vector>

#include "riskgate/riskfn.hpp"
#include "test_util.hpp"

using namespace riskgate;
using testutil::brute_inverse;
using testutil::brute_risk;
using testutil::random_set;

namespace {

CalibrationSet three_point_set() {
  CalibrationSet data;
  data.n = 3;
  data.m = 1;
  data.scores = {{0.1, 0.5, 0.9}};
  data.costs = {{1.0, 1.0, 1.0}};
  data.objective_costs = {1.0, 1.0, 1.0};
  return data;
}

}  // namespace

TEST_CASE("risk evaluation on the three-point example") {
  const CalibrationSet data = three_point_set();
  const RiskFunction empirical(data, 0, {}, RiskVariant::empirical);
  const RiskFunction bumped(data, 0, {}, RiskVariant::bumped, 1.0);

  CHECK(empirical(0.5) == 1.0 / 3.0);  // one score above 0.5
  CHECK(bumped(0.5) == 0.5);           // 1/4 + 1/4
  CHECK(empirical(0.9) == 0.0);        // empty indicator set
  CHECK(empirical(2.0) == 0.0);
  CHECK(bumped(0.9) == 0.25);          // bump only
  CHECK(empirical(0.0) == 1.0);
}

TEST_CASE("gen_inverse_base conventions") {
  const CalibrationSet data = three_point_set();
  const RiskFunction g(data, 0, {}, RiskVariant::empirical);
  const Interval domain{0.0, 1.0};

  CHECK(gen_inverse_base(g, 0.4, domain) == 0.5);   // g(0.1)=2/3, g(0.5)=1/3
  CHECK(gen_inverse_base(g, 1.0, domain) == 0.0);   // slack everywhere
  CHECK(gen_inverse_base(g, 1.5, domain) == 0.0);
  CHECK(gen_inverse_base(g, -0.5, domain) == 1.0);  // empty feasible set
  // Boundary comparisons are exact, no epsilon.
  CHECK(gen_inverse_base(g, 1.0 / 3.0, domain) == 0.5);

  const RiskFunction bumped(data, 0, {}, RiskVariant::bumped, 1.0);
  CHECK_THROWS_AS(gen_inverse_base(bumped, 0.4, domain), ValidationError);
}

TEST_CASE("gen_inverse_bumped conventions") {
  const CalibrationSet data = three_point_set();
  const RiskFunction g(data, 0, {}, RiskVariant::bumped, 1.0);
  const Interval domain{0.0, 1.0};

  CHECK(gen_inverse_bumped(g, 0.4, domain) == 0.9);  // g+(0.5)=0.5, g+(0.9)=0.25
  CHECK(gen_inverse_bumped(g, 1.0, domain) == 0.0);  // beta >= g+(lo)
}

TEST_CASE("bumped and empirical inverses differ by one step on a fine grid") {
  CalibrationSet data;
  data.n = 999;
  data.m = 1;
  data.scores.assign(1, {});
  data.costs.assign(1, std::vector<double>(999, 1.0));
  data.objective_costs.assign(999, 1.0);
  for (int i = 1; i <= 999; ++i) data.scores[0].push_back(i / 1000.0);

  const RiskFunction emp(data, 0, {}, RiskVariant::empirical);
  const RiskFunction bum(data, 0, {}, RiskVariant::bumped, 1.0);
  const Interval domain{0.0, 1.0};
  for (double beta : {0.05, 0.1, 0.25, 0.5, 0.9}) {
    const double a = gen_inverse_base(emp, beta, domain);
    const double b = gen_inverse_bumped(bum, beta, domain);
    CHECK(b >= a);
    CHECK(b - a <= 0.001 + 1e-12);
  }
}

TEST_CASE("gen_inverse_sym is the sup of the strict super-level set") {
  // 3 calibration points plus a test point at 0.7. The set {g_sym > 0.4} is
  // [0, 0.7): risks at the evaluation points are g_sym(0.5) = 2/4 and
  // g_sym(0.7) = 1/4, so the supremum is the crossing point 0.7.
  CalibrationSet rows = three_point_set();
  rows = testutil::with_row(rows, {0.7}, {1.0}, 1.0);
  const RiskFunction g(rows, 0, {}, RiskVariant::symmetric);
  const Interval domain{0.0, 1.0};

  CHECK(g(0.5) == 0.5);
  CHECK(g(0.7) == 0.25);
  CHECK(gen_inverse_sym(g, 0.4, domain) == 0.7);
  CHECK(gen_inverse_sym(g, 1.0, domain) == 0.0);   // super-level set empty
  CHECK(gen_inverse_sym(g, -0.1, domain) == 1.0);  // strict inequality everywhere
}

TEST_CASE("candidate_points") {
  using V = std::vector<double>;
  CHECK(candidate_points(V{0.5, 0.5, 0.9}, {0.0, 1.0}) == V{0.0, 0.5, 0.9, 1.0});
  CHECK(candidate_points(V{1.5, -0.2}, {0.0, 1.0}) == V{0.0, 1.0});
  CHECK(candidate_points(V{0.3}, {0.4, 0.6}) == V{0.4, 0.6});
}

TEST_CASE("risk functions are non-increasing and respect prefix monotonicity") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + gen() % 60;
    const std::size_t m = 1 + gen() % 3;
    const CalibrationSet data = random_set(gen, n, m, 2.0);
    const std::size_t j = m - 1;
    std::vector<double> prefix(j);
    for (double& p : prefix) p = unit(gen);

    const RiskFunction f(data, j, prefix, RiskVariant::empirical);
    double prev = f(-0.1);
    for (double lam = 0.0; lam <= 1.1; lam += 0.037) {
      const double cur = f(lam);
      CHECK(cur <= prev);
      prev = cur;
    }

    if (j > 0) {
      // Componentwise-larger prefixes let more rows through.
      std::vector<double> larger = prefix;
      larger[gen() % j] += 0.25;
      const RiskFunction f2(data, j, larger, RiskVariant::empirical);
      const double lam = unit(gen);
      CHECK(f2(lam) >= f(lam));
    }
  }
}

TEST_CASE("risk evaluation matches the brute-force definition") {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + gen() % 40;
    const std::size_t m = 1 + gen() % 3;
    const CalibrationSet data = random_set(gen, n, m, 2.0);
    const std::size_t j = gen() % m;
    std::vector<double> prefix(j);
    for (double& p : prefix) p = unit(gen);
    const double v_max = 2.0;

    const RiskFunction emp(data, j, prefix, RiskVariant::empirical);
    const RiskFunction bum(data, j, prefix, RiskVariant::bumped, v_max);
    for (int probe = 0; probe < 10; ++probe) {
      const double lam = unit(gen) * 1.2 - 0.1;
      CHECK(emp(lam) == doctest::Approx(brute_risk(data, j, prefix,
                                                   RiskVariant::empirical, 0.0, lam))
                            .epsilon(1e-12));
      CHECK(bum(lam) == doctest::Approx(brute_risk(data, j, prefix,
                                                   RiskVariant::bumped, v_max, lam))
                            .epsilon(1e-12));
    }
  }
}

TEST_CASE("sandwich between symmetric inverses") {
  // For every beta >= 0: U_sym(beta) <= U_plus(beta) <= U_sym(beta - delta),
  // with the symmetric risk built over the calibration rows plus the test row.
  std::mt19937_64 gen(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + gen() % 40;
    const std::size_t m = 1 + gen() % 3;
    const double v_max = 0.5 + unit(gen) * 2.0;
    const CalibrationSet calib = random_set(gen, n, m, v_max);
    std::vector<double> test_scores(m), test_costs(m);
    for (std::size_t j = 0; j < m; ++j) {
      test_scores[j] = unit(gen);
      test_costs[j] = unit(gen) * v_max;
    }
    const CalibrationSet full = testutil::with_row(calib, test_scores, test_costs, 0.0);

    const std::size_t j = gen() % m;
    std::vector<double> prefix(j);
    for (double& p : prefix) p = unit(gen);
    const Interval domain{0.0, 1.0};
    const double delta = v_max / static_cast<double>(n + 1);
    const double beta = unit(gen) * 1.2 * v_max;

    const RiskFunction bumped(calib, j, prefix, RiskVariant::bumped, v_max);
    const RiskFunction sym(full, j, prefix, RiskVariant::symmetric);

    const double u_plus = gen_inverse_bumped(bumped, beta, domain);
    CHECK(gen_inverse_sym(sym, beta, domain) <= u_plus);
    CHECK(u_plus <= gen_inverse_sym(sym, beta - delta, domain));

    // Pointwise: bumped dominates symmetric with gap at most delta.
    const double lam = unit(gen);
    const double gap = bumped(lam) - sym(lam);
    CHECK(gap >= -1e-15);
    CHECK(gap <= delta + 1e-15);
  }
}

TEST_CASE("restricting the search to any superset grid is exact") {
  std::mt19937_64 gen(53);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + gen() % 25;
    const CalibrationSet data = random_set(gen, n, 1, 1.5);
    const RiskFunction f(data, 0, {}, RiskVariant::empirical);
    const Interval domain{0.0, 1.0};
    const double beta = unit(gen);

    std::vector<double> grid = data.scores[0];
    for (int extra = 0; extra < 40; ++extra) grid.push_back(unit(gen));
    const double brute = brute_inverse(data, 0, {}, RiskVariant::empirical, 0.0,
                                       beta, domain, grid);
    CHECK(gen_inverse_base(f, beta, domain) == brute);
  }
}

TEST_CASE("small-scale enumeration matches both inverses exactly") {
  std::mt19937_64 gen(59);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + gen() % 8;
    const std::size_t m = 1 + gen() % 2;
    const double v_max = 0.5 + unit(gen);
    const CalibrationSet data = random_set(gen, n, m, v_max);
    const std::size_t j = gen() % m;
    std::vector<double> prefix(j);
    for (double& p : prefix) p = unit(gen);
    const Interval domain{0.0, 1.0};
    const double beta = unit(gen) * 1.5 * v_max - 0.1;

    std::vector<double> dense = data.scores[j];
    for (int extra = 0; extra < 200; ++extra) dense.push_back(unit(gen));

    const RiskFunction emp(data, j, prefix, RiskVariant::empirical);
    CHECK(gen_inverse_base(emp, beta, domain) ==
          brute_inverse(data, j, prefix, RiskVariant::empirical, 0.0, beta, domain,
                        dense));
    const RiskFunction bum(data, j, prefix, RiskVariant::bumped, v_max);
    CHECK(gen_inverse_bumped(bum, beta, domain) ==
          brute_inverse(data, j, prefix, RiskVariant::bumped, v_max, beta, domain,
                        dense));
  }
}

TEST_CASE("symmetric risk jumps are bounded under distinct scores") {
  std::mt19937_64 gen(61);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t rows = 3 + gen() % 40;  // calibration plus test point
    const double v_max = 2.0;
    const CalibrationSet data = random_set(gen, rows, 1, v_max);
    const RiskFunction g(data, 0, {}, RiskVariant::symmetric);
    const auto jumps = g.jump_points();
    const double bound = v_max / static_cast<double>(rows);  // V_max/(n+1)
    for (std::size_t k = 0; k + 1 < jumps.size(); ++k) {
      CHECK(g(jumps[k]) - g(jumps[k + 1]) <= bound + 1e-12);
    }
  }
}

TEST_CASE("grid-restricted crossing") {
  const CalibrationSet data = three_point_set();
  const RiskFunction g(data, 0, {}, RiskVariant::empirical);
  const Interval domain{0.0, 1.0};

  SUBCASE("a grid containing every jump point reproduces the exact crossing") {
    std::mt19937_64 gen(67);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
      const CalibrationSet random = random_set(gen, 1 + gen() % 30, 1, 1.5);
      const RiskFunction f(random, 0, {}, RiskVariant::empirical);
      std::vector<double> grid = candidate_points(random.scores[0], domain);
      for (int extra = 0; extra < 20; ++extra) grid.push_back(unit(gen));
      std::sort(grid.begin(), grid.end());
      const double beta = unit(gen);
      CHECK(f.crossing(beta, domain, grid).lambda == f.crossing(beta, domain).lambda);
    }
  }
  SUBCASE("a coarse grid snaps the threshold up to the next grid point") {
    const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    // Exact crossing for beta = 0.7 is the jump at 0.1 (g drops to 2/3
    // there); the grid minimum is the next grid point, 0.25.
    CHECK(g.crossing(0.7, domain).lambda == 0.1);
    CHECK(g.crossing(0.7, domain, grid).lambda == 0.25);
    // Nothing on the grid qualifies: conventional upper endpoint, flagged.
    const auto none = g.crossing(-1.0, domain, grid);
    CHECK(none.lambda == 1.0);
    CHECK(!none.found);
  }
}

TEST_CASE("ties at one score aggregate their costs into a single jump") {
  CalibrationSet data;
  data.n = 4;
  data.m = 1;
  data.scores = {{0.5, 0.5, 0.5, 0.9}};
  data.costs = {{0.25, 0.25, 0.5, 1.0}};
  data.objective_costs = {0.0, 0.0, 0.0, 0.0};
  const RiskFunction g(data, 0, {}, RiskVariant::empirical);
  CHECK(g.jump_points().size() == 2);
  CHECK(g(0.4) == 0.5);    // everything above
  CHECK(g(0.5) == 0.25);   // 1.0/4, all tied rows drop together
  CHECK(g(0.9) == 0.0);
}
