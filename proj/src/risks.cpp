#include "wsauc/risks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "wsauc/errors.hpp"

namespace wsauc {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kSupervised: return "supervised";
    case Scenario::kContaminated: return "contaminated";
    case Scenario::kNoisy: return "noisy";
    case Scenario::kPU: return "pu";
    case Scenario::kMIL: return "mil";
    case Scenario::kSSL: return "ssl";
    case Scenario::kNoisySSL: return "noisy_ssl";
  }
  return "?";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::kSupervised, Scenario::kContaminated, Scenario::kNoisy, Scenario::kPU,
                     Scenario::kMIL, Scenario::kSSL, Scenario::kNoisySSL}) {
    if (to_string(s) == name) return s;
  }
  throw InputError("unknown scenario '" + std::string(name) + "'");
}

double mean_pair_loss(const Eigen::Ref<const Vector>& scores_a, const Eigen::Ref<const Vector>& scores_b,
                      const SurrogateLoss& loss) {
  if (scores_a.size() == 0 || scores_b.size() == 0) throw InputError("pairwise risk: empty set");
  double sum = 0.0;
  for (Index i = 0; i < scores_a.size(); ++i) {
    for (Index j = 0; j < scores_b.size(); ++j) sum += loss_value(loss, scores_a[i] - scores_b[j]);
  }
  return sum / (static_cast<double>(scores_a.size()) * static_cast<double>(scores_b.size()));
}

RiskValue pairwise_risk(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                        const SurrogateLoss& loss, Scenario scenario) {
  if (xa.empty() || xb.empty()) throw InputError("pairwise_risk: empty instance set");
  return {mean_pair_loss(model.scores(xa.features), model.scores(xb.features), loss), xa.size() * xb.size(),
          scenario};
}

double recover_true_risk(double r_ab, const MixtureSpec& spec) {
  if (!(spec.a() > 0.0)) throw InputError("recover_true_risk: requires a > 0");
  return (r_ab - spec.b()) / spec.a();
}

RiskValue pu_risk(const InstanceSet& xp, const InstanceSet& xu, const Model& model, const SurrogateLoss& loss) {
  return pairwise_risk(xp, xu, model, loss, Scenario::kPU);
}

namespace {

RiskValue combined_risk(const InstanceSet& xp, const InstanceSet& xn, const InstanceSet& xu, const Model& model,
                        const SurrogateLoss& loss, double gamma, Scenario scenario) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  if (xp.empty() || xn.empty()) throw InputError("labeled sets must be non-empty");
  const Vector sp = model.scores(xp.features);
  const Vector sn = model.scores(xn.features);
  const double r_pn = mean_pair_loss(sp, sn, loss);
  std::int64_t pairs = xp.size() * xn.size();
  if (gamma == 1.0) return {r_pn, pairs, scenario};

  if (xu.empty()) throw InputError("unlabeled set must be non-empty when gamma < 1");
  const Vector su = model.scores(xu.features);
  const double r_pu = mean_pair_loss(sp, su, loss);
  const double r_un = mean_pair_loss(su, sn, loss);
  pairs += xp.size() * xu.size() + xu.size() * xn.size();
  return {gamma * r_pn + (1.0 - gamma) * (r_pu + r_un - 0.5), pairs, scenario};
}

}  // namespace

RiskValue pnu_risk(const InstanceSet& xp, const InstanceSet& xn, const InstanceSet& xu, const Model& model,
                   const SurrogateLoss& loss, double gamma) {
  return combined_risk(xp, xn, xu, model, loss, gamma, Scenario::kSSL);
}

RiskValue noisy_pnu_risk(const InstanceSet& xpt, const InstanceSet& xnt, const InstanceSet& xu,
                         const Model& model, const SurrogateLoss& loss, double gamma) {
  return combined_risk(xpt, xnt, xu, model, loss, gamma, Scenario::kNoisySSL);
}

double optimal_gamma(double psi_pn, double psi_pnu) {
  const double den = psi_pnu - psi_pn;
  if (den == 0.0 || !std::isfinite(den))
    throw NumericalError("optimal_gamma: psi_pnu == psi_pn, variance-optimal gamma undefined");
  return psi_pnu / den;
}

namespace {

struct Moments {
  double sigma2_pn, tau_a, tau_b, psi_pn, psi_pnu;
};

// Shared-index moments of the pairwise losses. Rows of `pn` are P~, columns N~.
Moments pair_moments(const Eigen::MatrixXd& pn, const Vector& g_a, const Vector& g_b,
                     const std::vector<Index>& rows, const std::vector<Index>& cols) {
  const auto m = static_cast<double>(rows.size()), n = static_cast<double>(cols.size());
  Vector h_a = Vector::Zero(static_cast<Index>(rows.size()));
  Vector h_b = Vector::Zero(static_cast<Index>(cols.size()));
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double v = pn(rows[r], cols[c]);
      h_a[static_cast<Index>(r)] += v;
      h_b[static_cast<Index>(c)] += v;
      sum += v;
      sum_sq += v * v;
    }
  }
  const double r_pn = sum / (m * n);
  h_a /= n;
  h_b /= m;
  const double sigma2 = std::max(0.0, sum_sq / (m * n) - r_pn * r_pn);

  double mean_ga = 0.0, mean_gb = 0.0;
  for (Index r : rows) mean_ga += g_a[r];
  for (Index c : cols) mean_gb += g_b[c];
  mean_ga /= m;
  mean_gb /= n;
  double tau_a = 0.0, tau_b = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    tau_a += (h_a[static_cast<Index>(r)] - r_pn) * (g_a[rows[r]] - mean_ga);
  for (std::size_t c = 0; c < cols.size(); ++c)
    tau_b += (h_b[static_cast<Index>(c)] - r_pn) * (g_b[cols[c]] - mean_gb);
  tau_a /= m;
  tau_b /= n;
  return {sigma2, tau_a, tau_b, sigma2 / (m * n), tau_a / m + tau_b / n};
}

}  // namespace

GammaEstimate variance_optimal_gamma(const InstanceSet& xpt, const InstanceSet& xnt, const InstanceSet& xu,
                                     const Model& model, const SurrogateLoss& loss, int bootstrap_rounds,
                                     std::uint64_t seed) {
  if (xpt.empty() || xnt.empty() || xu.empty())
    throw InputError("variance_optimal_gamma: all sets must be non-empty");
  if (bootstrap_rounds < 0) throw InputError("variance_optimal_gamma: negative bootstrap rounds");
  const Vector sp = model.scores(xpt.features);
  const Vector sn = model.scores(xnt.features);
  const Vector su = model.scores(xu.features);
  const Index m = sp.size(), n = sn.size(), u = su.size();

  Eigen::MatrixXd pn(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) pn(i, j) = loss_value(loss, sp[i] - sn[j]);
  // With the unlabeled sample treated as the population, a P~/U loss sharing
  // x_i has conditional mean g_a[i]; likewise g_b for U/N~ sharing x'_j.
  Vector g_a(m), g_b(n);
  for (Index i = 0; i < m; ++i) {
    double s = 0.0;
    for (Index k = 0; k < u; ++k) s += loss_value(loss, sp[i] - su[k]);
    g_a[i] = s / static_cast<double>(u);
  }
  for (Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Index k = 0; k < u; ++k) s += loss_value(loss, su[k] - sn[j]);
    g_b[j] = s / static_cast<double>(u);
  }

  std::vector<Index> rows(static_cast<std::size_t>(m)), cols(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
  for (Index j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;
  const Moments mo = pair_moments(pn, g_a, g_b, rows, cols);

  GammaEstimate est;
  est.sigma2_pn = mo.sigma2_pn;
  est.tau_pn_pu = mo.tau_a;
  est.tau_pn_un = mo.tau_b;
  est.psi_pn = mo.psi_pn;
  est.psi_pnu = mo.psi_pnu;
  // a constant scorer leaves only rounding residue in the moments
  const double lmax = std::max({pn.cwiseAbs().maxCoeff(), g_a.cwiseAbs().maxCoeff(), g_b.cwiseAbs().maxCoeff()});
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  const double tiny = 1e-12 * lmax * lmax * (1.0 / (md * nd) + 1.0 / md + 1.0 / nd);
  if (std::abs(mo.psi_pnu - mo.psi_pn) <= tiny) {
    est.degenerate = true;
    est.gamma_star = std::numeric_limits<double>::quiet_NaN();
    est.recommended_gamma = 1.0;
    return est;
  }
  est.gamma_star = optimal_gamma(mo.psi_pn, mo.psi_pnu);
  est.recommended_gamma = std::clamp(est.gamma_star, 0.0, 1.0);

  if (bootstrap_rounds > 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick_row(0, m - 1), pick_col(0, n - 1);
    double sum = 0.0, sum_sq = 0.0;
    int used = 0;
    for (int b = 0; b < bootstrap_rounds; ++b) {
      for (auto& r : rows) r = pick_row(rng);
      for (auto& c : cols) c = pick_col(rng);
      const Moments bm = pair_moments(pn, g_a, g_b, rows, cols);
      if (std::abs(bm.psi_pnu - bm.psi_pn) <= tiny) continue;
      const double g = bm.psi_pnu / (bm.psi_pnu - bm.psi_pn);
      sum += g;
      sum_sq += g * g;
      ++used;
    }
    if (used > 1) {
      const double mean = sum / used;
      est.gamma_star_se = std::sqrt(std::max(0.0, (sum_sq - used * mean * mean) / (used - 1)));
    }
  }
  return est;
}

}  // namespace wsauc
