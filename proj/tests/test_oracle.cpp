#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "wsauc/oracle.hpp"
#include "wsauc/scenarios.hpp"

using namespace wsauc;
using namespace testing;

TEST_CASE("naive pair risk") {
  const Model f = identity_scorer();
  CHECK(oracle::naive_pair_risk(one_dim({0.3}, Role::kP), one_dim({0.1}, Role::kN), f, SurrogateLoss::hinge()) ==
        doctest::Approx(0.8));
  CHECK(oracle::naive_pair_risk(one_dim({2, 3}, Role::kP), one_dim({0, 1}, Role::kN), f, SurrogateLoss::zero_one()) ==
        0.0);
  CHECK_THROWS_AS(oracle::naive_pair_risk(one_dim({1}, Role::kP), InstanceSet(FeatureMatrix(0, 1), Role::kN), f,
                                          SurrogateLoss::hinge()),
                  InputError);
}

TEST_CASE("exhaustive trimming check") {
  std::mt19937_64 rng(41);
  const InstanceSet xa = uniform_set(7, 1, Role::kP, rng, 0.0, 1.0), xb = uniform_set(5, 1, Role::kN, rng, 0.0, 1.0);
  const Model f = identity_scorer();
  CHECK(oracle::exhaustive_trim_equiv(xa, xb, f, SurrogateLoss::logistic(), 0.0, 0.0));
  const auto detail = oracle::exhaustive_trim_equiv_detail(xa, xb, f, SurrogateLoss::hinge(), 0.2, 0.3);
  CHECK(detail.equal);
  CHECK(detail.by_score == detail.by_instance_loss);
  // squared loss bends upward past margin 1, so wide score ranges are refused
  const InstanceSet wide = one_dim({3.0, -1.0}, Role::kP);
  CHECK_THROWS_AS(oracle::exhaustive_trim_equiv(wide, xb, f, SurrogateLoss::squared(), 0.2, 0.3), InputError);
}

TEST_CASE("finite differences") {
  Vector at(3);
  at << 0.5, -1.0, 2.0;
  const Vector g = oracle::fd_gradient([](const Vector& p) { return p.squaredNorm() + 3.0 * p[1]; }, at, 1e-4);
  Vector exact = 2.0 * at;
  exact[1] += 3.0;
  CHECK(rel_error(g, exact) < 1e-10);
  CHECK(oracle::fd_gradient([](const Vector&) { return 4.2; }, at, 1e-3) == Vector::Zero(3));
  CHECK_THROWS_AS(oracle::fd_gradient([](const Vector&) { return 0.0; }, at, 0.0), InputError);
}

TEST_CASE("resampling variance") {
  const auto pop = PopulationSpec::isotropic(1, 1.0);
  oracle::MCDesign design{30, 30, 0, 1.0, 0.0};
  CHECK(oracle::mc_variance([](const oracle::MCDraw&) { return 1.0; }, pop, design, 100, 1) == 0.0);
  CHECK_THROWS_AS(oracle::mc_variance([](const oracle::MCDraw&) { return 1.0; }, pop, design, 99, 1), InputError);

  // mean of 30 unit-variance draws has variance 1/30
  auto mean_a = [](const oracle::MCDraw& d) { return d.a.features.col(0).mean(); };
  const oracle::MCResult small = oracle::mc_moments(
      [&](const oracle::MCDraw& d) { return std::vector<double>{mean_a(d), 1.0}; }, pop, design, 400, 2);
  CHECK(std::abs(small.variance[0] - 1.0 / 30.0) <= 3.0 * small.variance_se[0]);
  CHECK(small.degenerate[1]);
  CHECK_FALSE(small.degenerate[0]);
  const oracle::MCResult large = oracle::mc_moments(
      [&](const oracle::MCDraw& d) { return std::vector<double>{mean_a(d)}; }, pop, design, 1600, 3);
  CHECK(large.variance_se[0] < small.variance_se[0]);
  CHECK(std::abs(large.variance[0] - 1.0 / 30.0) <= 3.0 * large.variance_se[0]);
  CHECK(oracle::mc_variance(mean_a, pop, design, 200, 4) == doctest::Approx(oracle::mc_variance(mean_a, pop, design, 200, 4)));
}

TEST_CASE("brute-force metric references") {
  Vector p(2), n(2);
  p << 0.9, 0.2;
  n << 0.5, 0.1;
  CHECK(oracle::brute_auc(p, n) == 0.75);
  CHECK(oracle::brute_opauc(p, n, 0.0, 1.0) == doctest::Approx(0.75));
  CHECK(oracle::brute_tpauc(p, n, 1.0, 0.0) == 0.75);
  CHECK(oracle::brute_rpauc(p, n, 0.0, 0.0) == 0.75);
  CHECK(oracle::region_tpauc(p, n, 1.0, 0.0) == doctest::Approx(0.75));
}
