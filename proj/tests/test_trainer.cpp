#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "wsauc/metrics.hpp"
#include "wsauc/oracle.hpp"
#include "wsauc/ranking.hpp"
#include "wsauc/scenarios.hpp"
#include "wsauc/trainer.hpp"

using namespace wsauc;
using namespace testing;

namespace {

TrainConfig quick_config(std::uint64_t seed) {
  TrainConfig c;
  c.seed = seed;
  c.outer_rounds = 10;
  c.inner_rounds = 10;
  c.batch_a = 32;
  c.batch_b = 32;
  c.learning_rate = 0.1;
  c.pair_plan = make_pair_plan(Scenario::kSupervised, c.gamma);
  return c;
}

double test_auc(const Model& m, const CleanSample& test) {
  return auc_exact({m.scores(test.pos.features), m.scores(test.neg.features)});
}

// Untrimmed pairwise SGD written out directly: same initialization, batch
// sampling stream and update rule as the trainer, no pools.
Model plain_trainer(const InstanceSet& xa, const InstanceSet& xb, const TrainConfig& c) {
  Model m = Model::initialized(c.architecture, xa.dim(), c.hidden_width, c.seed);
  std::mt19937_64 rng(c.seed + 0x9E3779B97F4A7C15ULL);
  auto draw = [&](Index n, Index k) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    k = std::min(k, n);
    for (Index i = 0; i < k; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  };
  auto rows = [](const InstanceSet& s, const std::vector<Index>& idx) {
    FeatureMatrix out(static_cast<Index>(idx.size()), s.dim());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Index>(k)) = s.features.row(idx[k]);
    return out;
  };
  for (int t = 0; t < c.outer_rounds; ++t) {
    for (int k = 0; k < c.inner_rounds; ++k) {
      const auto ia = draw(xa.size(), c.batch_a);
      const auto ib = draw(xb.size(), c.batch_b);
      m.params() -= c.learning_rate * batch_grad(rows(xa, ia), rows(xb, ib), m, c.loss);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("instance losses") {
  const auto hinge = SurrogateLoss::hinge();
  const Model f = identity_scorer();
  const InstanceSet xa = one_dim({0.5}, Role::kP), xb = one_dim({0.0, 1.0}, Role::kN);
  // (1 - 0.5) and (1 - (-0.5)) averaged
  CHECK(instance_loss(0, Side::kA, xa, xb, f, hinge) == doctest::Approx(1.0));
  CHECK(instance_loss(1, Side::kB, xa, xb, f, hinge) == doctest::Approx(1.5));
  CHECK_THROWS_AS(instance_loss(3, Side::kA, xa, xb, f, hinge), InputError);
  CHECK_THROWS_AS(instance_loss(0, Side::kA, xa, InstanceSet(FeatureMatrix(0, 1), Role::kN), f, hinge), InputError);

  const InstanceSet same = one_dim({0.2, 0.2, 0.2}, Role::kP);
  for (Index i = 0; i < 3; ++i)
    CHECK(instance_loss(i, Side::kA, same, same, f, SurrogateLoss::logistic()) ==
          instance_loss(0, Side::kB, same, same, f, SurrogateLoss::logistic()));
}

TEST_CASE("instance loss falls as the score rises on side A and rises on side B") {
  std::mt19937_64 rng(31);
  const Model f = identity_scorer();
  for (const auto& loss : {SurrogateLoss::logistic(), SurrogateLoss::hinge()}) {
    const InstanceSet xa = uniform_set(15, 1, Role::kP, rng), xb = uniform_set(12, 1, Role::kN, rng);
    for (Index i = 0; i < 15; ++i)
      for (Index j = 0; j < 15; ++j)
        if (xa.features(i, 0) < xa.features(j, 0))
          CHECK(instance_loss(i, Side::kA, xa, xb, f, loss) >= instance_loss(j, Side::kA, xa, xb, f, loss));
    for (Index i = 0; i < 12; ++i)
      for (Index j = 0; j < 12; ++j)
        if (xb.features(i, 0) < xb.features(j, 0))
          CHECK(instance_loss(i, Side::kB, xa, xb, f, loss) <= instance_loss(j, Side::kB, xa, xb, f, loss));
  }
}

TEST_CASE("trimming keeps the floor counts") {
  const Model f = identity_scorer();
  const InstanceSet xa = one_dim({0.9, 0.2, 0.8}, Role::kNoisyP), xb = one_dim({0.5, 0.1, 0.6}, Role::kNoisyN);
  auto [ka, kb] = trim_sets(xa, xb, f, 0.0, 0.0);
  CHECK(ka.features == xa.features);
  CHECK(kb.features == xb.features);
  auto [ta, tb] = trim_sets(xa, xb, f, 1.0 / 3.0, 1.0 / 3.0);
  REQUIRE(ta.size() == 2);
  CHECK(ta.features(0, 0) == 0.9);
  CHECK(ta.features(1, 0) == 0.8);
  REQUIRE(tb.size() == 2);
  CHECK(tb.features(0, 0) == 0.5);
  CHECK(tb.features(1, 0) == 0.1);
  CHECK_THROWS_WITH_AS(trim_sets(xa, xb, f, 0.0, 0.7), doctest::Contains("A"), DegenerateInputError);
  CHECK_THROWS_WITH_AS(trim_sets(xa, xb, f, 0.7, 0.0), doctest::Contains("B"), DegenerateInputError);
}

TEST_CASE("boundary ties are broken by index") {
  Vector sa(4), sb(4);
  sa << 1, 1, 1, 0;
  sb << 2, 2, 0, 2;
  const TrimmedPair t = trim_indices(sa, sb, 0.5, 0.5);
  CHECK(t.kept_a == std::vector<Index>{0, 1});
  CHECK(t.kept_b == std::vector<Index>{0, 2});
}

TEST_CASE("trimming depends only on score ranks") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> frac(0.0, 0.6);
  for (int t = 0; t < 100; ++t) {
    const Vector sa = tied_vector(1 + t % 20, rng), sb = tied_vector(1 + t % 13, rng);
    double a = frac(rng), b = frac(rng);
    if (floor_count(1 - b, sa.size()) < 1) b = 0;
    if (floor_count(1 - a, sb.size()) < 1) a = 0;
    const TrimmedPair x = trim_indices(sa, sb, a, b);
    const TrimmedPair y = trim_indices(Vector(sa.array().cube() * 2 - 5), Vector(sb.array().cube() * 2 - 5), a, b);
    CHECK(x.kept_a == y.kept_a);
    CHECK(x.kept_b == y.kept_b);
  }
}

TEST_CASE("raising alpha or beta only removes pairs") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> frac(0.0, 0.45);
  for (int t = 0; t < 100; ++t) {
    const Vector sa = uniform_vector(2 + t % 19, rng), sb = uniform_vector(2 + t % 11, rng);
    const double a0 = frac(rng), b0 = frac(rng);
    const double a1 = a0 + frac(rng), b1 = b0 + frac(rng);
    if (floor_count(1 - b1, sa.size()) < 1 || floor_count(1 - a1, sb.size()) < 1) continue;
    const TrimmedPair lo = trim_indices(sa, sb, a0, b0), hi = trim_indices(sa, sb, a1, b1);
    CHECK(std::includes(lo.kept_a.begin(), lo.kept_a.end(), hi.kept_a.begin(), hi.kept_a.end()));
    CHECK(std::includes(lo.kept_b.begin(), lo.kept_b.end(), hi.kept_b.begin(), hi.kept_b.end()));
  }
}

TEST_CASE("rpAUC risk") {
  const Model f = identity_scorer();
  std::mt19937_64 rng(34);
  const InstanceSet xa = uniform_set(9, 1, Role::kNoisyP, rng), xb = uniform_set(7, 1, Role::kNoisyN, rng);
  CHECK(rpauc_empirical_risk(xa, xb, f, SurrogateLoss::logistic(), 0, 0).value ==
        pairwise_risk(xa, xb, f, SurrogateLoss::logistic()).value);
  CHECK(rpauc_empirical_risk(one_dim({3, 4}, Role::kP), one_dim({1, 2}, Role::kN), f, SurrogateLoss::zero_one(), 0.5,
                             0.5)
            .value == 0.0);

  // 3 x 3 by hand: keep {0.9, 0.8} and {0.5, 0.1}; hinge losses 0.6, 0.2, 0.7, 0.3
  const InstanceSet ha = one_dim({0.9, 0.2, 0.8}, Role::kP), hb = one_dim({0.5, 0.1, 0.6}, Role::kN);
  const RiskValue r = rpauc_empirical_risk(ha, hb, f, SurrogateLoss::hinge(), 1.0 / 3.0, 1.0 / 3.0);
  CHECK(r.pair_count == 4);
  CHECK(r.value == doctest::Approx((0.6 + 0.2 + 0.7 + 0.3) / 4.0).epsilon(1e-14));
}

TEST_CASE("trimming by score equals removing the largest instance losses") {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> frac(0.0, 0.6);
  const SurrogateLoss losses[] = {SurrogateLoss::squared(), SurrogateLoss::logistic(), SurrogateLoss::hinge()};
  for (int t = 0; t < 100; ++t) {
    const auto& loss = losses[t % 3];
    const Index m = 1 + t % 20, n = 1 + (t * 7) % 20;
    const bool squared = loss.kind == LossKind::kSquared;
    const InstanceSet xa = uniform_set(m, 1, Role::kP, rng, squared ? 0.0 : -2.0, squared ? 1.0 : 2.0);
    const InstanceSet xb = uniform_set(n, 1, Role::kN, rng, squared ? 0.0 : -2.0, squared ? 1.0 : 2.0);
    double a = frac(rng), b = frac(rng);
    if (floor_count(1 - b, m) < 1) b = 0;
    if (floor_count(1 - a, n) < 1) a = 0;
    CHECK(oracle::exhaustive_trim_equiv(xa, xb, identity_scorer(), loss, a, b));
  }
}

TEST_CASE("batch gradient hand case and flat region") {
  Vector xa(2), xb(2);
  xa << 1.0, 2.0;
  xb << 0.5, -1.0;
  Vector w(2);
  w << 0.3, -0.2;
  const Model m = Model::linear(w);
  const double z = m.score(xa) - m.score(xb);
  const Vector g = batch_grad(FeatureMatrix(xa.transpose()), FeatureMatrix(xb.transpose()), m, SurrogateLoss::squared());
  CHECK(rel_error(g, Vector(-2.0 * (1.0 - z) * (xa - xb))) < 1e-14);

  // every pair margin above 1: hinge is flat
  const Model big = Model::linear(Vector::Constant(1, 10.0));
  CHECK(batch_grad(one_dim({1, 2}, Role::kP).features, one_dim({0, -1}, Role::kN).features, big,
                   SurrogateLoss::hinge()) == Vector::Zero(1));
  CHECK_THROWS_AS(batch_grad(one_dim({1}, Role::kP).features, one_dim({0}, Role::kN).features, big,
                             SurrogateLoss::zero_one()),
                  UnsupportedOperation);
  CHECK_THROWS_AS(batch_grad(FeatureMatrix(0, 1), one_dim({0}, Role::kN).features, big, SurrogateLoss::hinge()),
                  InputError);
}

TEST_CASE("batch gradient matches finite differences") {
  std::mt19937_64 rng(36);
  for (auto arch : {Architecture::kLinear, Architecture::kMlp1}) {
    for (int t = 0; t < 50; ++t) {
      const Index d = 1 + t % 4;
      const FeatureMatrix a = uniform_matrix(1 + t % 6, d, rng), b = uniform_matrix(1 + t % 5, d, rng);
      const Model m = Model::initialized(arch, d, 5, rng());
      const auto loss = t % 2 ? SurrogateLoss::logistic() : SurrogateLoss::squared();
      auto risk = [&](const Vector& p) {
        const Model q(arch, d, m.hidden_width(), p);
        return mean_pair_loss(q.scores(a), q.scores(b), loss);
      };
      CHECK(rel_error(batch_grad(a, b, m, loss), oracle::fd_gradient(risk, m.params(), 1e-5)) < 1e-5);
    }
  }
}

TEST_CASE("pair plans") {
  CHECK(make_pair_plan(Scenario::kSupervised, 0.45) == std::vector<PairTerm>{{Role::kP, Role::kN, 1.0}});
  CHECK(make_pair_plan(Scenario::kNoisy, 0.45) == std::vector<PairTerm>{{Role::kNoisyP, Role::kNoisyN, 1.0}});
  CHECK(make_pair_plan(Scenario::kPU, 0.45) == std::vector<PairTerm>{{Role::kP, Role::kU, 1.0}});
  CHECK(make_pair_plan(Scenario::kMIL, 0.45) ==
        std::vector<PairTerm>{{Role::kBagPositive, Role::kBagNegative, 1.0}});
  const auto ssl = make_pair_plan(Scenario::kSSL, 0.45);
  REQUIRE(ssl.size() == 3);
  CHECK(ssl[0].weight == doctest::Approx(0.45 / 1.55));
  CHECK(ssl[1].weight == doctest::Approx(0.55 / 1.55));
  CHECK(ssl[1].a == Role::kP);
  CHECK(ssl[1].b == Role::kU);
  CHECK(ssl[2].a == Role::kU);
  CHECK(ssl[2].b == Role::kN);
  CHECK(make_pair_plan(Scenario::kNoisySSL, 1.0).size() == 1);
  CHECK(make_pair_plan(Scenario::kSSL, 0.0).size() == 2);
}

TEST_CASE("train config validation") {
  TrainConfig c = quick_config(1);
  CHECK_NOTHROW(c.validate());
  c.loss = SurrogateLoss::zero_one();
  CHECK_THROWS_AS(c.validate(), UnsupportedOperation);
  c = quick_config(1);
  c.alpha = 1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = quick_config(1);
  c.pair_plan[0].weight = 0.9;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = quick_config(1);
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.validate(), InputError);

  RoleSets only_p;
  only_p[Role::kP] = one_dim({1, 2}, Role::kP);
  CHECK_THROWS_WITH_AS(train(only_p, quick_config(1)), doctest::Contains("N"), InputError);
  only_p[Role::kN] = one_dim({0}, Role::kN);
  TrainConfig trims = quick_config(1);
  trims.alpha = 0.5;
  CHECK_THROWS_AS(train(only_p, trims), DegenerateInputError);
}

TEST_CASE("separable Gaussians are learned") {
  const auto pop = PopulationSpec::isotropic(2, 8.0);
  const CleanSample tr = sample_clean(pop, 300, 300, 1), te = sample_clean(pop, 1000, 1000, 2);
  RoleSets sets{{Role::kP, tr.pos}, {Role::kN, tr.neg}};
  const TrainResult res = train(sets, quick_config(3));
  CHECK(test_auc(res.model, te) >= 0.99);
  CHECK(res.trace.steps.size() == 100);
  CHECK(res.trace.rounds.size() == 10);
  CHECK(res.trace.final_rpauc_risk.size() == 1);
  CHECK(res.trace.final_rpauc_risk[0] ==
        rpauc_empirical_risk(tr.pos, tr.neg, res.model, SurrogateLoss::logistic(), 0, 0).value);
}

TEST_CASE("no trimming reproduces plain pairwise training bit for bit") {
  const auto pop = PopulationSpec::isotropic(3, 2.0);
  const CleanSample tr = sample_clean(pop, 90, 70, 5);
  for (auto arch : {Architecture::kLinear, Architecture::kMlp1}) {
    TrainConfig c = quick_config(11);
    c.architecture = arch;
    c.hidden_width = 6;
    c.track_full_risk = false;
    const Model robust = train({{Role::kP, tr.pos}, {Role::kN, tr.neg}}, c).model;
    CHECK(robust.params() == plain_trainer(tr.pos, tr.neg, c).params());
  }
}

TEST_CASE("training is deterministic in the seed") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  const CleanSample tr = sample_clean(pop, 80, 80, 7);
  RoleSets sets{{Role::kP, tr.pos}, {Role::kN, tr.neg}};
  TrainConfig c = quick_config(4);
  c.alpha = 0.1;
  c.beta = 0.2;
  const TrainResult a = train(sets, c), b = train(sets, c);
  CHECK(a.model.params() == b.model.params());
  c.seed = 5;
  CHECK_FALSE(train(sets, c).model.params() == a.model.params());
}

TEST_CASE("divergence is reported with its position") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  const CleanSample tr = sample_clean(pop, 50, 50, 8);
  TrainConfig c = quick_config(1);
  c.loss = SurrogateLoss::squared();
  c.learning_rate = 1e150;
  CHECK_THROWS_WITH_AS(train({{Role::kP, tr.pos}, {Role::kN, tr.neg}}, c), doctest::Contains("round"),
                       NumericalError);
}

TEST_CASE("three-set plans train on every pair") {
  const auto pop = PopulationSpec::isotropic(2, 3.0);
  const CleanSample tr = sample_clean(pop, 200, 200, 9);
  const SSLSets ssl = make_ssl(tr.pos, tr.neg, 0.2, 1);
  TrainConfig c = quick_config(2);
  c.pair_plan = make_pair_plan(Scenario::kSSL, 0.45);
  const TrainResult res = train({{Role::kP, ssl.pos}, {Role::kN, ssl.neg}, {Role::kU, ssl.unlabeled}}, c);
  CHECK(res.trace.steps.size() == 300);
  CHECK(res.trace.final_rpauc_risk.size() == 3);
  CHECK(test_auc(res.model, sample_clean(pop, 500, 500, 10)) > 0.9);
}

TEST_CASE("rpAUC training holds up under heavy symmetric label noise") {
  // separable classes, 40% of each class flipped
  const auto pop = PopulationSpec::isotropic(2, 6.0);
  const CleanSample te = sample_clean(pop, 1000, 1000, 99);
  std::vector<double> plain, robust;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CleanSample tr = sample_clean(pop, 200, 200, 100 + s);
    const NoisySets ns = corrupt_noisy(tr.pos, tr.neg, 0.4, 0.4, 200 + s);
    RoleSets sets{{Role::kNoisyP, ns.noisy_p}, {Role::kNoisyN, ns.noisy_n}};
    TrainConfig c = quick_config(300 + s);
    c.pair_plan = make_pair_plan(Scenario::kNoisy, c.gamma);
    plain.push_back(test_auc(train(sets, c).model, te));
    c.alpha = 0.4;
    c.beta = 0.4;
    c.warmup_rounds = 3;  // trimming from a reversed random start locks in
    robust.push_back(test_auc(train(sets, c).model, te));
  }
  const double mp = std::accumulate(plain.begin(), plain.end(), 0.0) / 10;
  const double mr = std::accumulate(robust.begin(), robust.end(), 0.0) / 10;
  MESSAGE("mean test AUC plain " << mp << ", rpAUC " << mr);
  CHECK(mr >= mp);
}

TEST_CASE("bag scores") {
  const Model f = identity_scorer();
  CHECK(bag_score(f, one_dim({0.3}, Role::kBagPositive).features) == 0.3);
  CHECK(bag_score(f, one_dim({2, 2, 2}, Role::kBagPositive).features) == 2.0);
  std::mt19937_64 rng(37);
  for (int t = 0; t < 50; ++t) {
    const FeatureMatrix bag = uniform_matrix(1 + t % 9, 2, rng);
    const Model m = Model::initialized(Architecture::kMlp1, 2, 3, rng());
    double best = -INFINITY;
    for (Index i = 0; i < bag.rows(); ++i) best = std::max(best, m.score(bag.row(i).transpose()));
    CHECK(bag_score(m, bag) == best);
  }
  CHECK_THROWS_AS(bag_score(f, FeatureMatrix(0, 1)), InputError);
}

TEST_CASE("sampling without replacement") {
  std::mt19937_64 rng(38);
  const std::vector<Index> pool = {4, 8, 15, 16, 23, 42};
  const auto s = sample_without_replacement(pool, 4, rng);
  CHECK(s.size() == 4);
  CHECK(std::set<Index>(s.begin(), s.end()).size() == 4);
  for (Index v : s) CHECK(std::find(pool.begin(), pool.end(), v) != pool.end());
  CHECK(sample_without_replacement(pool, 10, rng).size() == 6);
}

TEST_CASE("warm-up rounds keep every instance") {
  std::mt19937_64 rng(71);
  RoleSets sets{{Role::kNoisyP, uniform_set(40, 2, Role::kNoisyP, rng)},
                {Role::kNoisyN, uniform_set(30, 2, Role::kNoisyN, rng)}};
  TrainConfig c = quick_config(5);
  c.pair_plan = make_pair_plan(Scenario::kNoisy, c.gamma);
  c.alpha = 0.2;
  c.beta = 0.25;
  c.warmup_rounds = 4;
  const TrainResult r = train(sets, c);
  for (const auto& rec : r.trace.rounds) {
    CHECK(rec.kept_a == (rec.round < 4 ? 40 : 30));
    CHECK(rec.kept_b == (rec.round < 4 ? 30 : 24));
  }
  c.warmup_rounds = -1;
  CHECK_THROWS_AS(c.validate(), InputError);
}
