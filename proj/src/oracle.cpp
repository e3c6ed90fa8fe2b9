#include "wsauc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "wsauc/errors.hpp"
#include "wsauc/trainer.hpp"

namespace wsauc::oracle {

double naive_pair_risk(const InstanceSet& xa, const InstanceSet& xb, const Model& model, const SurrogateLoss& loss) {
  if (xa.empty() || xb.empty()) throw InputError("naive_pair_risk: empty set");
  double sum = 0.0;
  for (Index i = 0; i < xa.size(); ++i) {
    const double si = model.score(xa.row(i).transpose());
    for (Index j = 0; j < xb.size(); ++j) sum += loss_value(loss, si - model.score(xb.row(j).transpose()));
  }
  return sum / static_cast<double>(xa.size() * xb.size());
}

namespace {

// Rank of element i among v, counting strictly better values and equal
// values at a lower index.
Index brute_rank(const Vector& v, Index i, bool descending) {
  Index r = 0;
  for (Index k = 0; k < v.size(); ++k) {
    const bool better = descending ? v[k] > v[i] : v[k] < v[i];
    if (better || (v[k] == v[i] && k < i)) ++r;
  }
  return r;
}

std::vector<Index> brute_keep(const Vector& v, Index keep, bool descending) {
  std::vector<Index> out;
  for (Index i = 0; i < v.size(); ++i)
    if (brute_rank(v, i, descending) < keep) out.push_back(i);
  return out;
}

double brute_auc_subset(const Vector& pos, const std::vector<Index>& ip, const Vector& neg,
                        const std::vector<Index>& in) {
  double correct = 0.0;
  for (Index i : ip)
    for (Index j : in) correct += pos[i] > neg[j] ? 1.0 : (pos[i] == neg[j] ? 0.5 : 0.0);
  return correct / (static_cast<double>(ip.size()) * static_cast<double>(in.size()));
}

std::vector<Index> all_of(Index n) {
  std::vector<Index> v;
  for (Index i = 0; i < n; ++i) v.push_back(i);
  return v;
}

// ROC vertices (FPR, TPR) at every distinct score threshold, from (0, 0).
std::vector<std::pair<double, double>> brute_roc(const Vector& pos, const Vector& neg) {
  std::vector<double> thr(pos.data(), pos.data() + pos.size());
  thr.insert(thr.end(), neg.data(), neg.data() + neg.size());
  std::sort(thr.begin(), thr.end(), std::greater<>());
  thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (double t : thr) {
    double tp = 0, fp = 0;
    for (Index i = 0; i < pos.size(); ++i) tp += pos[i] >= t;
    for (Index j = 0; j < neg.size(); ++j) fp += neg[j] >= t;
    pts.emplace_back(fp / static_cast<double>(neg.size()), tp / static_cast<double>(pos.size()));
  }
  return pts;
}

// Integral of max(0, TPR(f) - floor) over f in [lo, hi] along the polyline.
double clipped_area(const std::vector<std::pair<double, double>>& pts, double lo, double hi, double floor) {
  double area = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const auto [f0, t0] = pts[k - 1];
    const auto [f1, t1] = pts[k];
    if (f1 <= f0) continue;
    const double a = std::max(f0, lo), b = std::min(f1, hi);
    if (b <= a) continue;
    auto at = [&](double f) { return t0 + (t1 - t0) * (f - f0) / (f1 - f0) - floor; };
    const double ya = at(a), yb = at(b);
    if (ya >= 0 && yb >= 0) {
      area += 0.5 * (ya + yb) * (b - a);
    } else if (ya > 0 || yb > 0) {
      // the segment crosses the floor
      const double fc = a + (b - a) * ya / (ya - yb);
      area += ya > 0 ? 0.5 * ya * (fc - a) : 0.5 * yb * (b - fc);
    }
  }
  return area;
}

}  // namespace

TrimEquivalence exhaustive_trim_equiv_detail(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                                             const SurrogateLoss& loss, double alpha, double beta) {
  const Index m = xa.size(), n = xb.size();
  if (m == 0 || n == 0) throw InputError("exhaustive_trim_equiv: empty set");
  Vector sa(m), sb(n);
  for (Index i = 0; i < m; ++i) sa[i] = model.score(xa.row(i).transpose());
  for (Index j = 0; j < n; ++j) sb[j] = model.score(xb.row(j).transpose());
  const double z_lo = sa.minCoeff() - sb.maxCoeff(), z_hi = sa.maxCoeff() - sb.minCoeff();
  if (!nonincreasing_on(loss, z_lo, z_hi))
    throw InputError("exhaustive_trim_equiv: loss is not nonincreasing on the realized margins");

  Eigen::MatrixXd pair(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) pair(i, j) = loss_value(loss, sa[i] - sb[j]);
  const Vector inst_a = pair.rowwise().mean();
  const Vector inst_b = pair.colwise().mean().transpose();

  const Index drop_a = m - static_cast<Index>(std::floor((1.0 - beta) * static_cast<double>(m) + 1e-9));
  const Index drop_b = n - static_cast<Index>(std::floor((1.0 - alpha) * static_cast<double>(n) + 1e-9));
  auto survivors = [](const Vector& inst, Index drop) {
    std::vector<Index> order = all_of(inst.size());
    std::stable_sort(order.begin(), order.end(), [&](Index p, Index q) { return inst[p] > inst[q]; });
    std::vector<Index> keep(order.begin() + drop, order.end());
    std::sort(keep.begin(), keep.end());
    return keep;
  };
  const auto keep_a = survivors(inst_a, drop_a);
  const auto keep_b = survivors(inst_b, drop_b);

  double sum = 0.0;
  for (Index i : keep_a)
    for (Index j : keep_b) sum += pair(i, j);
  const double by_loss = sum / (static_cast<double>(keep_a.size()) * static_cast<double>(keep_b.size()));
  const double by_score = rpauc_empirical_risk(xa, xb, model, loss, alpha, beta).value;
  return {std::abs(by_loss - by_score) <= 1e-12, by_score, by_loss};
}

bool exhaustive_trim_equiv(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                           const SurrogateLoss& loss, double alpha, double beta) {
  return exhaustive_trim_equiv_detail(xa, xb, model, loss, alpha, beta).equal;
}

Vector fd_gradient(const std::function<double(const Vector&)>& eval, const Vector& at, double h) {
  if (!(h > 0.0)) throw InputError("fd_gradient: step must be positive");
  Vector g(at.size());
  Vector x = at;
  for (Index k = 0; k < at.size(); ++k) {
    x[k] = at[k] + h;
    const double up = eval(x);
    x[k] = at[k] - h;
    const double down = eval(x);
    x[k] = at[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

MCResult mc_moments(const std::function<std::vector<double>(const MCDraw&)>& estimators, const PopulationSpec& pop,
                    const MCDesign& design, int rounds, std::uint64_t seed) {
  if (rounds < 100) throw InputError("mc_moments: at least 100 rounds required");
  GaussianSampler sampler(pop);
  std::mt19937_64 rng(seed);
  MCResult r;
  for (int t = 0; t < rounds; ++t) {
    MCDraw d;
    d.a = sampler.draw_mixture(design.theta_a, design.n_a, Role::kNoisyP, rng);
    d.b = sampler.draw_mixture(design.theta_b, design.n_b, Role::kNoisyN, rng);
    if (design.n_u > 0) d.u = sampler.draw_mixture(pop.pi_p, design.n_u, Role::kU, rng);
    const std::vector<double> v = estimators(d);
    if (r.values.empty()) r.values.resize(v.size());
    if (v.size() != r.values.size()) throw InputError("mc_moments: estimator count changed between rounds");
    for (std::size_t e = 0; e < v.size(); ++e) r.values[e].push_back(v[e]);
  }
  const double R = rounds;
  for (const auto& vals : r.values) {
    double mean = 0.0;
    for (double x : vals) mean += x;
    mean /= R;
    double ss = 0.0, m4 = 0.0;
    for (double x : vals) {
      const double d2 = (x - mean) * (x - mean);
      ss += d2;
      m4 += d2 * d2;
    }
    const double var = ss / (R - 1.0);
    const double mean_d2 = ss / R;
    r.mean.push_back(mean);
    r.variance.push_back(var);
    r.variance_se.push_back(std::sqrt(std::max(0.0, m4 / R - mean_d2 * mean_d2) / R));
    r.degenerate.push_back(ss == 0.0);
  }
  return r;
}

double mc_variance(const std::function<double(const MCDraw&)>& estimator, const PopulationSpec& pop,
                   const MCDesign& design, int rounds, std::uint64_t seed) {
  const MCResult r = mc_moments([&](const MCDraw& d) { return std::vector<double>{estimator(d)}; }, pop, design,
                                rounds, seed);
  return r.degenerate[0] ? 0.0 : r.variance[0];
}

double variance_difference_se(const MCResult& r, std::size_t i, std::size_t j) {
  const auto& a = r.values.at(i);
  const auto& b = r.values.at(j);
  const double R = static_cast<double>(a.size());
  std::vector<double> delta(a.size());
  double mean = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    delta[t] = (a[t] - r.mean[i]) * (a[t] - r.mean[i]) - (b[t] - r.mean[j]) * (b[t] - r.mean[j]);
    mean += delta[t];
  }
  mean /= R;
  double ss = 0.0;
  for (double d : delta) ss += (d - mean) * (d - mean);
  return std::sqrt(ss / (R - 1.0) / R);
}

double brute_auc(const Vector& pos, const Vector& neg) {
  return brute_auc_subset(pos, all_of(pos.size()), neg, all_of(neg.size()));
}

double brute_opauc(const Vector& pos, const Vector& neg, double alpha, double beta) {
  return clipped_area(brute_roc(pos, neg), alpha, beta, 0.0) / (beta - alpha);
}

double brute_tpauc(const Vector& pos, const Vector& neg, double alpha, double beta) {
  const auto m = static_cast<double>(pos.size()), n = static_cast<double>(neg.size());
  const Index kp = std::max<Index>(1, static_cast<Index>(std::ceil((1.0 - beta) * m - 1e-9)));
  const Index kn = std::max<Index>(1, static_cast<Index>(std::ceil(alpha * n - 1e-9)));
  return brute_auc_subset(pos, brute_keep(pos, kp, false), neg, brute_keep(neg, kn, true));
}

double brute_rpauc(const Vector& pos, const Vector& neg, double alpha, double beta) {
  const auto m = static_cast<double>(pos.size()), n = static_cast<double>(neg.size());
  const auto kp = static_cast<Index>(std::floor((1.0 - beta) * m + 1e-9));
  const auto kn = static_cast<Index>(std::floor((1.0 - alpha) * n + 1e-9));
  if (kp < 1 || kn < 1) throw DegenerateInputError("brute_rpauc: empty side after trimming");
  return brute_auc_subset(pos, brute_keep(pos, kp, true), neg, brute_keep(neg, kn, false));
}

double region_tpauc(const Vector& pos, const Vector& neg, double alpha, double beta) {
  return clipped_area(brute_roc(pos, neg), 0.0, alpha, beta) / (alpha * (1.0 - beta));
}

}  // namespace wsauc::oracle
