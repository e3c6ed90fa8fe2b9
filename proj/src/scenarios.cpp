#include "wsauc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "wsauc/detail/sampling.hpp"
#include "wsauc/errors.hpp"
#include "wsauc/ranking.hpp"

namespace wsauc {

PopulationSpec PopulationSpec::isotropic(Index dim, double separation, double pi_p) {
  if (dim <= 0) throw InputError("PopulationSpec: dimension must be positive");
  const Vector dir = Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  PopulationSpec p;
  p.mean_pos = 0.5 * separation * dir;
  p.mean_neg = -0.5 * separation * dir;
  p.cov_pos = Eigen::MatrixXd::Identity(dim, dim);
  p.cov_neg = Eigen::MatrixXd::Identity(dim, dim);
  p.pi_p = pi_p;
  return p;
}

double PopulationSpec::separation_for_auc(double auc) {
  if (!(auc > 0.5 && auc < 1.0)) throw InputError("separation_for_auc: auc must lie in (0.5, 1)");
  // Isotropic classes at distance D have AUC = Phi(D / sqrt 2).
  auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid / std::sqrt(2.0)) < auc ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void PopulationSpec::validate() const {
  const Index d = mean_pos.size();
  if (d == 0 || mean_neg.size() != d || cov_pos.rows() != d || cov_pos.cols() != d || cov_neg.rows() != d ||
      cov_neg.cols() != d)
    throw InputError("PopulationSpec: inconsistent dimensions");
  if (!(pi_p > 0.0 && pi_p < 1.0)) throw InputError("PopulationSpec: pi_p must lie in (0, 1)");
  for (const auto* c : {&cov_pos, &cov_neg}) {
    if (!c->isApprox(c->transpose())) throw InputError("PopulationSpec: covariance not symmetric");
    if (Eigen::LLT<Eigen::MatrixXd>(*c).info() != Eigen::Success)
      throw InputError("PopulationSpec: covariance not positive definite");
  }
}

GaussianSampler::GaussianSampler(const PopulationSpec& pop) : pop_(pop) {
  pop_.validate();
  chol_pos_ = Eigen::LLT<Eigen::MatrixXd>(pop_.cov_pos).matrixL();
  chol_neg_ = Eigen::LLT<Eigen::MatrixXd>(pop_.cov_neg).matrixL();
}

FeatureMatrix GaussianSampler::draw(bool positive, Index n, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index d = pop_.dim();
  const Eigen::MatrixXd& l = positive ? chol_pos_ : chol_neg_;
  const Vector& mu = positive ? pop_.mean_pos : pop_.mean_neg;
  FeatureMatrix out(n, d);
  Vector z(d);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) z[k] = normal(rng);
    out.row(i) = (mu + l * z).transpose();
  }
  return out;
}

InstanceSet GaussianSampler::draw_mixture(double theta, Index n, Role role, std::mt19937_64& rng,
                                          std::size_t first_id) const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("draw_mixture: theta must lie in [0, 1]");
  std::bernoulli_distribution coin(theta);
  InstanceSet out(FeatureMatrix(n, pop_.dim()), role);
  for (Index i = 0; i < n; ++i) {
    const bool pos = coin(rng);
    out.features.row(i) = draw(pos, 1, rng);
    out.truth.push_back(pos ? 1 : -1);
    out.ids.push_back(first_id + static_cast<std::size_t>(i));
  }
  return out;
}

CleanSample sample_clean(const PopulationSpec& pop, Index n_p, Index n_n, std::uint64_t seed) {
  if (n_p < 1 || n_n < 1) throw InputError("sample_clean: both class sizes must be at least 1");
  GaussianSampler sampler(pop);
  std::mt19937_64 rng(seed);
  CleanSample s{InstanceSet(sampler.draw(true, n_p, rng), Role::kP),
                InstanceSet(sampler.draw(false, n_n, rng), Role::kN)};
  s.pos.truth.assign(static_cast<std::size_t>(n_p), 1);
  s.neg.truth.assign(static_cast<std::size_t>(n_n), -1);
  for (Index i = 0; i < n_p; ++i) s.pos.ids.push_back(static_cast<std::size_t>(i));
  for (Index j = 0; j < n_n; ++j) s.neg.ids.push_back(static_cast<std::size_t>(n_p + j));
  return s;
}

namespace {

std::vector<Index> iota_indices(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

std::vector<Index> shuffled(Index n, std::mt19937_64& rng) {
  return sample_without_replacement(iota_indices(n), n, rng);
}

void require_truth(const InstanceSet& s, int label, const char* what) {
  if (s.truth.empty()) return;
  for (int t : s.truth) {
    if (t != label) throw InputError(std::string(what) + ": input set contains the other class");
  }
}

}  // namespace

double NoiseStats::eta_p() const {
  return static_cast<double>(flipped_neg) / static_cast<double>(noisy_p_size());
}

double NoiseStats::eta_n() const {
  return static_cast<double>(flipped_pos) / static_cast<double>(noisy_n_size());
}

NoisySets corrupt_noisy(const InstanceSet& xp, const InstanceSet& xn, double eta_p, double eta_n,
                        std::uint64_t seed) {
  xp.validate();
  xn.validate();
  if (xp.dim() != xn.dim()) throw InputError("corrupt_noisy: dimension mismatch");
  if (!(eta_p >= 0.0 && eta_p < 0.5 && eta_n >= 0.0 && eta_n < 0.5))
    throw InputError("corrupt_noisy: noise rates must lie in [0, 0.5)");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip_p(eta_p), flip_n(eta_n);
  std::vector<Index> keep_p, move_p, keep_n, move_n;
  for (Index i = 0; i < xp.size(); ++i) (flip_p(rng) ? move_p : keep_p).push_back(i);
  for (Index j = 0; j < xn.size(); ++j) (flip_n(rng) ? move_n : keep_n).push_back(j);

  NoisySets out;
  out.noisy_p = concat(xp.subset(keep_p), xn.subset(move_n), Role::kNoisyP);
  out.noisy_n = concat(xn.subset(keep_n), xp.subset(move_p), Role::kNoisyN);
  out.stats.n_pos = xp.size();
  out.stats.n_neg = xn.size();
  out.stats.flipped_pos = static_cast<Index>(move_p.size());
  out.stats.flipped_neg = static_cast<Index>(move_n.size());
  out.stats.bound_violated = eta_p + eta_n >= 0.5;
  return out;
}

double PUSets::pi_p_unlabeled() const {
  return static_cast<double>(u_pos) / static_cast<double>(u_pos + u_neg);
}

PUSets make_pu(const InstanceSet& xp, const InstanceSet& xn, double label_ratio, std::uint64_t seed) {
  if (!(label_ratio > 0.0 && label_ratio <= 1.0)) throw InputError("make_pu: label ratio must lie in (0, 1]");
  if (xp.empty()) throw InputError("make_pu: no positives");
  if (!xn.empty() && xp.dim() != xn.dim()) throw InputError("make_pu: dimension mismatch");
  require_truth(xp, 1, "make_pu");
  require_truth(xn, -1, "make_pu");
  const Index n_lab = floor_count(label_ratio, xp.size());
  if (n_lab < 1) throw DegenerateInputError("make_pu: label ratio leaves no labeled positives");
  std::mt19937_64 rng(seed);
  const auto perm = shuffled(xp.size(), rng);
  std::vector<Index> lab(perm.begin(), perm.begin() + n_lab);
  std::vector<Index> rest(perm.begin() + n_lab, perm.end());
  std::sort(lab.begin(), lab.end());
  std::sort(rest.begin(), rest.end());
  if (rest.empty() && xn.empty()) throw DegenerateInputError("make_pu: unlabeled set would be empty");

  PUSets out;
  out.labeled = xp.subset(lab);
  out.labeled.role = Role::kP;
  const InstanceSet pooled = concat(xp.subset(rest), xn, Role::kU);
  out.unlabeled = pooled.subset(shuffled(pooled.size(), rng));
  out.u_pos = static_cast<Index>(rest.size());
  out.u_neg = xn.size();
  return out;
}

double SSLSets::pi_p_unlabeled() const {
  return static_cast<double>(u_pos) / static_cast<double>(u_pos + u_neg);
}

SSLSets make_ssl(const InstanceSet& xp, const InstanceSet& xn, double label_ratio, std::uint64_t seed) {
  if (!(label_ratio > 0.0 && label_ratio <= 1.0)) throw InputError("make_ssl: label ratio must lie in (0, 1]");
  if (xp.empty() || xn.empty()) throw InputError("make_ssl: both classes required");
  if (xp.dim() != xn.dim()) throw InputError("make_ssl: dimension mismatch");
  require_truth(xp, 1, "make_ssl");
  require_truth(xn, -1, "make_ssl");
  const Index lp = floor_count(label_ratio, xp.size());
  const Index ln = floor_count(label_ratio, xn.size());
  if (lp < 1) throw DegenerateInputError("make_ssl: label ratio leaves no labeled positives");
  if (ln < 1) throw DegenerateInputError("make_ssl: label ratio leaves no labeled negatives");
  std::mt19937_64 rng(seed);
  auto split = [&](const InstanceSet& s, Index k) {
    const auto perm = shuffled(s.size(), rng);
    std::vector<Index> lab(perm.begin(), perm.begin() + k), rest(perm.begin() + k, perm.end());
    std::sort(lab.begin(), lab.end());
    std::sort(rest.begin(), rest.end());
    return std::pair{s.subset(lab), s.subset(rest)};
  };
  auto [pl, pr] = split(xp, lp);
  auto [nl, nr] = split(xn, ln);
  if (pr.empty() && nr.empty()) throw DegenerateInputError("make_ssl: unlabeled set would be empty");
  SSLSets out;
  out.pos = std::move(pl);
  out.pos.role = Role::kP;
  out.neg = std::move(nl);
  out.neg.role = Role::kN;
  const InstanceSet pooled = concat(pr, nr, Role::kU);
  out.unlabeled = pooled.subset(shuffled(pooled.size(), rng));
  out.u_pos = pr.size();
  out.u_neg = nr.size();
  return out;
}

double MILSets::eta_p() const {
  const Index total = pos_bags.size();
  return static_cast<double>(total - n_pos_bags * witnesses_per_bag) / static_cast<double>(total);
}

MILSets make_mil(const InstanceSet& xp, const InstanceSet& xn, Index n_pos_bags, Index n_neg_bags, Index bag_size,
                 double witness_rate, std::uint64_t seed) {
  if (n_pos_bags < 1 || n_neg_bags < 1 || bag_size < 1)
    throw InputError("make_mil: bag counts and bag size must be positive");
  if (!(witness_rate > 0.0 && witness_rate <= 1.0))
    throw InputError("make_mil: witness rate must lie in (0, 1]");
  if (xp.dim() != xn.dim()) throw InputError("make_mil: dimension mismatch");
  require_truth(xp, 1, "make_mil");
  require_truth(xn, -1, "make_mil");
  const Index k = std::max<Index>(1, ceil_count(witness_rate, bag_size));
  const Index need_pos = n_pos_bags * k;
  const Index need_neg = n_pos_bags * (bag_size - k) + n_neg_bags * bag_size;
  if (xp.size() < need_pos || xn.size() < need_neg)
    throw InputError("make_mil: need " + std::to_string(need_pos) + " positives and " + std::to_string(need_neg) +
                     " negatives");

  std::mt19937_64 rng(seed);
  const auto perm_p = sample_without_replacement(iota_indices(xp.size()), need_pos, rng);
  const auto perm_n = sample_without_replacement(iota_indices(xn.size()), need_neg, rng);
  auto with_truth = [](InstanceSet s, int label) {
    if (s.truth.empty()) s.truth.assign(static_cast<std::size_t>(s.size()), label);
    return s;
  };
  const InstanceSet pos_pool = with_truth(xp.subset(perm_p), 1);
  const InstanceSet neg_pool = with_truth(xn.subset(perm_n), -1);

  MILSets out;
  out.n_pos_bags = n_pos_bags;
  out.n_neg_bags = n_neg_bags;
  out.bag_size = bag_size;
  out.witnesses_per_bag = k;
  std::vector<Index> pick_p, pick_n;
  Index next_p = 0, next_n = 0;
  InstanceSet pos_bags(FeatureMatrix(0, xp.dim()), Role::kBagPositive);
  for (Index b = 0; b < n_pos_bags; ++b) {
    std::vector<Index> wp, wn;
    for (Index i = 0; i < k; ++i) wp.push_back(next_p++);
    for (Index i = k; i < bag_size; ++i) wn.push_back(next_n++);
    InstanceSet bag = concat(pos_pool.subset(wp), neg_pool.subset(wn), Role::kBagPositive);
    bag.bag_ids.assign(static_cast<std::size_t>(bag_size), static_cast<int>(b));
    pos_bags = concat(pos_bags, bag, Role::kBagPositive);
  }
  InstanceSet neg_bags(FeatureMatrix(0, xn.dim()), Role::kBagNegative);
  for (Index b = 0; b < n_neg_bags; ++b) {
    std::vector<Index> wn;
    for (Index i = 0; i < bag_size; ++i) wn.push_back(next_n++);
    InstanceSet bag = neg_pool.subset(wn);
    bag.role = Role::kBagNegative;
    bag.bag_ids.assign(static_cast<std::size_t>(bag_size), static_cast<int>(n_pos_bags + b));
    neg_bags = concat(neg_bags, bag, Role::kBagNegative);
  }
  out.pos_bags = std::move(pos_bags);
  out.neg_bags = std::move(neg_bags);
  return out;
}

void DiscretePopulation::validate() const {
  const Index k = support.rows();
  if (k == 0 || pos_weights.size() != k || neg_weights.size() != k)
    throw InputError("DiscretePopulation: weights must cover the support");
  for (const Vector* w : {&pos_weights, &neg_weights}) {
    if ((w->array() < 0.0).any()) throw InputError("DiscretePopulation: negative weight");
    if (std::abs(w->sum() - 1.0) > 1e-12) throw InputError("DiscretePopulation: weights must sum to 1");
  }
}

DiscretePopulation random_discrete_population(Index support_size, Index dim, std::mt19937_64& rng) {
  if (support_size < 1 || dim < 1) throw InputError("random_discrete_population: sizes must be positive");
  std::uniform_int_distribution<int> coord(-2, 2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DiscretePopulation pop;
  pop.support.resize(support_size, dim);
  for (Index i = 0; i < support_size; ++i)
    for (Index k = 0; k < dim; ++k) pop.support(i, k) = coord(rng);
  auto weights = [&] {
    Vector w(support_size);
    for (Index i = 0; i < support_size; ++i) w[i] = unif(rng) < 0.2 ? 0.0 : unif(rng);
    if (w.sum() == 0.0) w[0] = 1.0;
    return Vector(w / w.sum());
  };
  pop.pos_weights = weights();
  pop.neg_weights = weights();
  return pop;
}

double enumerate_pair_risk(const Eigen::Ref<const Vector>& support_scores, const Eigen::Ref<const Vector>& w_a,
                           const Eigen::Ref<const Vector>& w_b, const SurrogateLoss& loss) {
  const Index k = support_scores.size();
  if (w_a.size() != k || w_b.size() != k) throw InputError("enumerate_pair_risk: weight length mismatch");
  double total = 0.0;
  for (Index i = 0; i < k; ++i) {
    if (w_a[i] == 0.0) continue;
    double row = 0.0;
    for (Index j = 0; j < k; ++j) row += w_b[j] * loss_value(loss, support_scores[i] - support_scores[j]);
    total += w_a[i] * row;
  }
  return total;
}

ExactRisks enumerate_exact_risk(const DiscretePopulation& pop, const MixtureSpec& mixture, const Model& scorer,
                                const SurrogateLoss& loss) {
  pop.validate();
  const Vector s = scorer.scores(pop.support);
  return {enumerate_pair_risk(s, pop.mixture_weights(mixture.theta_a()), pop.mixture_weights(mixture.theta_b()),
                              loss),
          enumerate_pair_risk(s, pop.pos_weights, pop.neg_weights, loss)};
}

}  // namespace wsauc
