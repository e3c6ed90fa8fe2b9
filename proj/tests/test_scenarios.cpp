#include <cmath>
#include <random>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "wsauc/ranking.hpp"
#include "wsauc/scenarios.hpp"

using namespace wsauc;
using namespace testing;

namespace {

std::set<std::size_t> id_set(const InstanceSet& s) { return {s.ids.begin(), s.ids.end()}; }

Index count_truth(const InstanceSet& s, int label) {
  Index c = 0;
  for (int v : s.truth) c += (v == label);
  return c;
}

}  // namespace

TEST_CASE("clean samples are seed-deterministic") {
  const auto pop = PopulationSpec::isotropic(3, 1.0);
  const CleanSample a = sample_clean(pop, 20, 30, 5), b = sample_clean(pop, 20, 30, 5);
  CHECK(a.pos.features == b.pos.features);
  CHECK(a.neg.features == b.neg.features);
  CHECK(a.pos.role == Role::kP);
  CHECK(a.neg.role == Role::kN);
  CHECK_FALSE(sample_clean(pop, 20, 30, 6).pos.features == a.pos.features);
  CHECK_THROWS_AS(sample_clean(pop, 0, 30, 5), InputError);
}

TEST_CASE("sample means sit within 3 sigma of the population means") {
  const auto pop = PopulationSpec::isotropic(2, 3.0);
  const Index n = 4000;
  const CleanSample s = sample_clean(pop, n, n, 9);
  const Vector mp = s.pos.features.colwise().mean().transpose();
  const Vector mn = s.neg.features.colwise().mean().transpose();
  for (Index k = 0; k < 2; ++k) {
    CHECK(std::abs(mp[k] - pop.mean_pos[k]) <= 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(mn[k] - pop.mean_neg[k]) <= 3.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("population specification") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  CHECK((pop.mean_pos - pop.mean_neg).norm() == doctest::Approx(2.0));
  const double d = PopulationSpec::separation_for_auc(0.95);
  // Phi(d / sqrt 2) = 0.95
  CHECK(0.5 * std::erfc(-d / 2.0) == doctest::Approx(0.95).epsilon(1e-9));
  PopulationSpec bad = pop;
  bad.cov_pos(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = pop;
  bad.pi_p = 1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  CHECK_THROWS_AS(PopulationSpec::separation_for_auc(0.4), InputError);
}

TEST_CASE("label noise") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  const CleanSample s = sample_clean(pop, 400, 600, 3);

  const NoisySets none = corrupt_noisy(s.pos, s.neg, 0.0, 0.0, 1);
  CHECK(none.noisy_p.features == s.pos.features);
  CHECK(none.noisy_n.features == s.neg.features);
  CHECK(none.noisy_p.role == Role::kNoisyP);
  CHECK(none.noisy_n.role == Role::kNoisyN);

  const NoisySets ns = corrupt_noisy(s.pos, s.neg, 0.2, 0.3, 2);
  CHECK(ns.stats.bound_violated);
  // flips move instances, never duplicate or drop them
  std::set<std::size_t> all = id_set(ns.noisy_p);
  for (auto id : id_set(ns.noisy_n)) CHECK(all.insert(id).second);
  CHECK(all == [&] {
    auto u = id_set(s.pos);
    for (auto id : id_set(s.neg)) u.insert(id);
    return u;
  }());
  CHECK(ns.noisy_p.size() + ns.noisy_n.size() == 1000);
  // binomial 3 sigma on flip counts
  CHECK(std::abs(static_cast<double>(ns.stats.flipped_pos) - 80.0) <= 3.0 * std::sqrt(400 * 0.2 * 0.8));
  CHECK(std::abs(static_cast<double>(ns.stats.flipped_neg) - 180.0) <= 3.0 * std::sqrt(600 * 0.3 * 0.7));
  CHECK(count_truth(ns.noisy_p, -1) == ns.stats.flipped_neg);
  CHECK(count_truth(ns.noisy_n, 1) == ns.stats.flipped_pos);

  CHECK(MixtureSpec::noisy(0.2, 0.3).a() == doctest::Approx(0.5));
  const MixtureSpec m = ns.stats.mixture();
  CHECK(m.a() == 1.0 - ns.stats.eta_p() - ns.stats.eta_n());
  CHECK_FALSE(corrupt_noisy(s.pos, s.neg, 0.2, 0.2, 2).stats.bound_violated);
  CHECK_THROWS_AS(corrupt_noisy(s.pos, s.neg, 0.5, 0.0, 2), InputError);
}

TEST_CASE("positive-unlabeled split") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  const CleanSample s = sample_clean(pop, 1000, 1500, 4);
  const PUSets pu = make_pu(s.pos, s.neg, 0.1, 5);
  CHECK(pu.labeled.size() == 100);
  CHECK(pu.unlabeled.size() == 2400);
  CHECK(pu.u_pos == 900);
  CHECK(pu.u_neg == 1500);
  CHECK(count_truth(pu.unlabeled, 1) == 900);
  CHECK(pu.pi_p_unlabeled() == 900.0 / 2400.0);
  CHECK(pu.mixture().a() == 1500.0 / 2400.0);
  CHECK(pu.labeled.role == Role::kP);
  CHECK(pu.unlabeled.role == Role::kU);
  std::set<std::size_t> ids = id_set(pu.labeled);
  for (auto id : id_set(pu.unlabeled)) CHECK(ids.insert(id).second);
  CHECK(ids.size() == 2500);

  const CleanSample only = sample_clean(pop, 10, 1, 4);
  CHECK_THROWS_AS(make_pu(only.pos, InstanceSet(FeatureMatrix(0, 2), Role::kN), 1.0, 1), InputError);
  CHECK_THROWS_AS(make_pu(s.pos, s.neg, 0.0005, 1), InputError);
  CHECK_THROWS_AS(make_pu(s.pos, s.neg, 0.0, 1), InputError);
}

TEST_CASE("semi-supervised split") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  const CleanSample s = sample_clean(pop, 400, 600, 6);
  const SSLSets ssl = make_ssl(s.pos, s.neg, 0.25, 7);
  CHECK(ssl.pos.size() == 100);
  CHECK(ssl.neg.size() == 150);
  CHECK(ssl.unlabeled.size() == 750);
  CHECK(ssl.u_pos == 300);
  CHECK(count_truth(ssl.unlabeled, 1) == 300);
  CHECK(ssl.pi_p_unlabeled() == doctest::Approx(0.4));
  CHECK_THROWS_AS(make_ssl(s.pos, s.neg, 0.001, 1), InputError);
}

TEST_CASE("multi-instance bags") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  const CleanSample s = sample_clean(pop, 100, 300, 8);
  const MILSets mil = make_mil(s.pos, s.neg, 10, 12, 10, 0.3, 9);
  CHECK(mil.pos_bags.size() == 100);
  CHECK(mil.neg_bags.size() == 120);
  CHECK(mil.witnesses_per_bag == 3);
  CHECK(mil.eta_p() == doctest::Approx(0.7));
  CHECK(mil.mixture().a() == doctest::Approx(0.3));
  CHECK(count_truth(mil.neg_bags, 1) == 0);
  std::map<int, Index> witnesses;
  for (Index i = 0; i < mil.pos_bags.size(); ++i)
    witnesses[mil.pos_bags.bag_ids[static_cast<std::size_t>(i)]] += (mil.pos_bags.truth[static_cast<std::size_t>(i)] == 1);
  CHECK(witnesses.size() == 10);
  for (const auto& [id, c] : witnesses) CHECK(c >= 1);
  std::set<int> neg_ids(mil.neg_bags.bag_ids.begin(), mil.neg_bags.bag_ids.end());
  CHECK(neg_ids.size() == 12);
  CHECK(*neg_ids.begin() == 10);

  const MILSets pure = make_mil(s.pos, s.neg, 5, 5, 4, 1.0, 1);
  CHECK(count_truth(pure.pos_bags, -1) == 0);
  const MILSets thin = make_mil(s.pos, s.neg, 5, 5, 4, 0.01, 1);
  CHECK(thin.witnesses_per_bag == 1);
  CHECK_THROWS_AS(make_mil(s.pos, s.neg, 50, 50, 10, 0.3, 1), InputError);
  CHECK_THROWS_AS(make_mil(s.pos, s.neg, 5, 5, 4, 0.0, 1), InputError);
}

TEST_CASE("finite populations") {
  std::mt19937_64 rng(10);
  const auto pop = random_discrete_population(15, 2, rng);
  CHECK_NOTHROW(pop.validate());
  CHECK(pop.pos_weights.sum() == doctest::Approx(1.0));
  CHECK(pop.mixture_weights(1.0) == pop.pos_weights);
  const Model f = Model::linear(Vector::Ones(2));
  const auto zo = SurrogateLoss::zero_one();
  const ExactRisks clean = enumerate_exact_risk(pop, MixtureSpec::clean(), f, zo);
  CHECK(clean.r_ab == clean.r_pn);
  const ExactRisks flat = enumerate_exact_risk(pop, MixtureSpec(0.7, 0.2), Model::linear(Vector::Zero(2)), zo);
  CHECK(flat.r_ab == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(flat.r_pn == doctest::Approx(0.5).epsilon(1e-15));
  DiscretePopulation bad = pop;
  bad.neg_weights[0] = -1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("mixture draws carry truth and ids") {
  const auto pop = PopulationSpec::isotropic(2, 2.0);
  GaussianSampler g(pop);
  std::mt19937_64 rng(11);
  const InstanceSet s = g.draw_mixture(0.7, 2000, Role::kNoisyP, rng, 50);
  CHECK(s.ids.front() == 50);
  CHECK(s.ids.back() == 2049);
  const double frac = static_cast<double>(s.count_true_positives()) / 2000.0;
  CHECK(std::abs(frac - 0.7) <= 3.0 * std::sqrt(0.7 * 0.3 / 2000.0));
}
