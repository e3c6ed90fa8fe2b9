#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wsauc/loss.hpp"
#include "wsauc/model.hpp"
#include "wsauc/scenarios.hpp"
#include "wsauc/types.hpp"

/// Deliberately naive reference implementations. Nothing here calls into the
/// risks, metrics, ranking or trainer code it is used to check.
namespace wsauc::oracle {

/// O(mn) double loop scoring each instance separately.
double naive_pair_risk(const InstanceSet& xa, const InstanceSet& xb, const Model& model, const SurrogateLoss& loss);

struct TrimEquivalence {
  bool equal;
  double by_score;        // rpauc_empirical_risk (score trimming)
  double by_instance_loss;  // removal of the highest instance losses
};

/// Remove the highest-L(x) members of each side (L against the full
/// opposite set), recompute the pairwise risk and compare to
/// rpauc_empirical_risk within 1e-12. Throws InputError if the loss is not
/// nonincreasing over the realized score differences.
TrimEquivalence exhaustive_trim_equiv_detail(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                                             const SurrogateLoss& loss, double alpha, double beta);
bool exhaustive_trim_equiv(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                           const SurrogateLoss& loss, double alpha, double beta);

/// Central differences of eval at `at`, one coordinate at a time.
Vector fd_gradient(const std::function<double(const Vector&)>& eval, const Vector& at, double h);

/// Monte-Carlo design: |A| ~ theta_a mixture, |B| ~ theta_b mixture,
/// |U| ~ the population prior.
struct MCDesign {
  Index n_a = 0;
  Index n_b = 0;
  Index n_u = 0;
  double theta_a = 1.0;
  double theta_b = 0.0;
};

struct MCDraw {
  InstanceSet a;
  InstanceSet b;
  InstanceSet u;
};

struct MCResult {
  std::vector<std::vector<double>> values;  // [estimator][round]
  std::vector<double> mean;
  std::vector<double> variance;     // unbiased sample variance
  std::vector<double> variance_se;  // standard error of variance
  std::vector<bool> degenerate;     // estimator constant across rounds
};

/// Evaluate several estimators on the same independent resamples.
MCResult mc_moments(const std::function<std::vector<double>(const MCDraw&)>& estimators, const PopulationSpec& pop,
                    const MCDesign& design, int rounds, std::uint64_t seed);

/// Sample variance of a single estimator over independent resamples.
double mc_variance(const std::function<double(const MCDraw&)>& estimator, const PopulationSpec& pop,
                   const MCDesign& design, int rounds, std::uint64_t seed);

/// Standard error of var[i] - var[j] from paired squared deviations.
double variance_difference_se(const MCResult& r, std::size_t i, std::size_t j);

// Brute-force metrics on raw score vectors.
double brute_auc(const Vector& pos, const Vector& neg);
/// Explicit ROC polyline from per-threshold counts, clipped to [alpha, beta].
double brute_opauc(const Vector& pos, const Vector& neg, double alpha, double beta);
double brute_tpauc(const Vector& pos, const Vector& neg, double alpha, double beta);
double brute_rpauc(const Vector& pos, const Vector& neg, double alpha, double beta);
/// Area of the ROC polyline inside [0, alpha] x [beta, 1], over alpha(1 - beta).
double region_tpauc(const Vector& pos, const Vector& neg, double alpha, double beta);

}  // namespace wsauc::oracle
