#pragma once

#include <cstdint>
#include <random>

#include "wsauc/loss.hpp"
#include "wsauc/model.hpp"
#include "wsauc/types.hpp"

namespace wsauc {

/// Two Gaussian class-conditional densities and a class prior.
struct PopulationSpec {
  Vector mean_pos;
  Vector mean_neg;
  Eigen::MatrixXd cov_pos;
  Eigen::MatrixXd cov_neg;
  double pi_p = 0.5;

  /// Identity covariances, means at +/- separation/2 along the unit diagonal.
  static PopulationSpec isotropic(Index dim, double separation, double pi_p = 0.5);
  /// Separation giving the requested Bayes AUC for isotropic classes.
  static double separation_for_auc(double auc);

  Index dim() const { return mean_pos.size(); }
  void validate() const;
};

/// Draws i.i.d. instances from the class densities. Truth labels and ids
/// (starting at first_id) are attached.
class GaussianSampler {
 public:
  explicit GaussianSampler(const PopulationSpec& pop);

  FeatureMatrix draw(bool positive, Index n, std::mt19937_64& rng) const;
  /// n draws from theta p_P + (1 - theta) p_N; each instance's class is an
  /// independent Bernoulli(theta).
  InstanceSet draw_mixture(double theta, Index n, Role role, std::mt19937_64& rng, std::size_t first_id = 0) const;

 private:
  PopulationSpec pop_;
  Eigen::MatrixXd chol_pos_;
  Eigen::MatrixXd chol_neg_;
};

struct CleanSample {
  InstanceSet pos;  // role P
  InstanceSet neg;  // role N
};

CleanSample sample_clean(const PopulationSpec& pop, Index n_p, Index n_n, std::uint64_t seed);

/// Realized composition of a noisy split.
struct NoiseStats {
  Index n_pos = 0, n_neg = 0;            // clean inputs
  Index flipped_pos = 0, flipped_neg = 0;  // moved to the other side
  bool bound_violated = false;           // eta_p + eta_n >= 0.5 was requested

  Index noisy_p_size() const { return n_pos - flipped_pos + flipped_neg; }
  Index noisy_n_size() const { return n_neg - flipped_neg + flipped_pos; }
  /// Fraction of X_P~ that is truly negative.
  double eta_p() const;
  /// Fraction of X_N~ that is truly positive.
  double eta_n() const;
  /// Mixture with theta_a = 1 - eta_p(), theta_b = eta_n().
  MixtureSpec mixture() const { return MixtureSpec::noisy(eta_p(), eta_n()); }
};

struct NoisySets {
  InstanceSet noisy_p;  // kept positives followed by flipped negatives
  InstanceSet noisy_n;  // kept negatives followed by flipped positives
  NoiseStats stats;
};

/// Each positive moves to the noisy-negative set with probability eta_p and
/// each negative to the noisy-positive set with probability eta_n.
NoisySets corrupt_noisy(const InstanceSet& xp, const InstanceSet& xn, double eta_p, double eta_n,
                        std::uint64_t seed);

struct PUSets {
  InstanceSet labeled;    // role P
  InstanceSet unlabeled;  // role U
  Index u_pos = 0, u_neg = 0;

  double pi_p_unlabeled() const;
  MixtureSpec mixture() const { return MixtureSpec::pu_counts(u_pos, u_neg); }
};

/// floor(label_ratio * |X_P|) positives stay labeled; the rest of the
/// positives and all negatives are pooled and shuffled into X_U.
PUSets make_pu(const InstanceSet& xp, const InstanceSet& xn, double label_ratio, std::uint64_t seed);

struct SSLSets {
  InstanceSet pos;        // role P
  InstanceSet neg;        // role N
  InstanceSet unlabeled;  // role U
  Index u_pos = 0, u_neg = 0;

  double pi_p_unlabeled() const;
};

SSLSets make_ssl(const InstanceSet& xp, const InstanceSet& xn, double label_ratio, std::uint64_t seed);

struct MILSets {
  InstanceSet pos_bags;  // union of positive bags, role BagPositive
  InstanceSet neg_bags;  // union of negative bags, role BagNegative
  Index n_pos_bags = 0, n_neg_bags = 0, bag_size = 0;
  Index witnesses_per_bag = 0;

  /// Fraction of positive-bag instances that are negative.
  double eta_p() const;
  MixtureSpec mixture() const { return MixtureSpec::mil(eta_p()); }
};

/// Positive bags hold ceil(witness_rate * bag_size) positives (at least one)
/// and negatives otherwise; negative bags are all negative. Bag ids are
/// 0..n_pos_bags-1 for positive bags, then negative bags.
MILSets make_mil(const InstanceSet& xp, const InstanceSet& xn, Index n_pos_bags, Index n_neg_bags, Index bag_size,
                 double witness_rate, std::uint64_t seed);

/// Finite-support class-conditional distributions.
struct DiscretePopulation {
  FeatureMatrix support;
  Vector pos_weights;
  Vector neg_weights;

  void validate() const;
  /// Weights of theta p_P + (1 - theta) p_N over the support.
  Vector mixture_weights(double theta) const { return theta * pos_weights + (1.0 - theta) * neg_weights; }
};

/// Random population on small integer-valued support points, so scores of a
/// linear model with integer weights tie frequently.
DiscretePopulation random_discrete_population(Index support_size, Index dim, std::mt19937_64& rng);

/// Sum_i Sum_j w_a[i] w_b[j] l(s[i] - s[j]).
double enumerate_pair_risk(const Eigen::Ref<const Vector>& support_scores, const Eigen::Ref<const Vector>& w_a,
                           const Eigen::Ref<const Vector>& w_b, const SurrogateLoss& loss);

struct ExactRisks {
  double r_ab;
  double r_pn;
};

/// Exact population risks of the contaminated pair (p_A, p_B) and the clean
/// pair (p_P, p_N).
ExactRisks enumerate_exact_risk(const DiscretePopulation& pop, const MixtureSpec& mixture, const Model& scorer,
                                const SurrogateLoss& loss);

}  // namespace wsauc
