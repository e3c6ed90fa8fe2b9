#pragma once

#include <cstdint>
#include <string_view>

#include "wsauc/loss.hpp"
#include "wsauc/model.hpp"
#include "wsauc/types.hpp"

namespace wsauc {

/// Weak-supervision setting a risk was computed for.
enum class Scenario { kSupervised, kContaminated, kNoisy, kPU, kMIL, kSSL, kNoisySSL };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

struct RiskValue {
  double value = 0.0;
  std::int64_t pair_count = 0;
  Scenario scenario = Scenario::kContaminated;
};

/// Mean of l(s_a[i] - s_b[j]) over all ordered pairs, summed left to right.
double mean_pair_loss(const Eigen::Ref<const Vector>& scores_a, const Eigen::Ref<const Vector>& scores_b,
                      const SurrogateLoss& loss);

/// Empirical pairwise risk of ranking X_A above X_B.
RiskValue pairwise_risk(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                        const SurrogateLoss& loss, Scenario scenario = Scenario::kContaminated);

/// Undo R_AB = a R_PN + b.
double recover_true_risk(double r_ab, const MixtureSpec& spec);

/// Positives against unlabeled data treated as negatives.
RiskValue pu_risk(const InstanceSet& xp, const InstanceSet& xu, const Model& model, const SurrogateLoss& loss);

/// gamma R_PN + (1 - gamma)(R_PU + R_UN - 1/2). X_U may be empty when gamma == 1.
RiskValue pnu_risk(const InstanceSet& xp, const InstanceSet& xn, const InstanceSet& xu, const Model& model,
                   const SurrogateLoss& loss, double gamma);

/// pnu_risk over noisy labeled sets.
RiskValue noisy_pnu_risk(const InstanceSet& xpt, const InstanceSet& xnt, const InstanceSet& xu,
                         const Model& model, const SurrogateLoss& loss, double gamma);

/// gamma* = psi_pnu / (psi_pnu - psi_pn). Throws NumericalError when the
/// denominator vanishes.
double optimal_gamma(double psi_pn, double psi_pnu);

struct GammaEstimate {
  double sigma2_pn = 0.0;   // variance of single pair losses on P~ x N~
  double tau_pn_pu = 0.0;   // covariance of pair losses sharing x in P~
  double tau_pn_un = 0.0;   // covariance of pair losses sharing x' in N~
  double psi_pn = 0.0;
  double psi_pnu = 0.0;
  double gamma_star = 0.0;  // raw formula value, NaN when degenerate
  double recommended_gamma = 1.0;  // gamma_star clamped to [0, 1]
  double gamma_star_se = 0.0;      // bootstrap standard error, 0 without rounds
  bool degenerate = false;
};

/// Plug-in estimate of the variance-minimizing mixing weight for a fixed
/// model, in the large-unlabeled-sample limit. With bootstrap_rounds > 0 the
/// labeled sets are resampled to give a standard error for gamma_star.
GammaEstimate variance_optimal_gamma(const InstanceSet& xpt, const InstanceSet& xnt, const InstanceSet& xu,
                                     const Model& model, const SurrogateLoss& loss, int bootstrap_rounds,
                                     std::uint64_t seed = 0);

}  // namespace wsauc
