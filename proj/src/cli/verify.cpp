#include "wsauc/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "wsauc/cli/commands.hpp"
#include "wsauc/errors.hpp"
#include "wsauc/metrics.hpp"
#include "wsauc/oracle.hpp"
#include "wsauc/ranking.hpp"
#include "wsauc/risks.hpp"
#include "wsauc/scenarios.hpp"
#include "wsauc/trainer.hpp"

namespace wsauc::cli {

namespace {

using Rng = std::mt19937_64;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Record one comparison; keep the first failure as the counterexample.
void record(SuiteResult& r, int draw, double err, const std::string& what) {
  r.max_error = std::max(r.max_error, std::isnan(err) ? INFINITY : err);
  if (!(err <= r.tolerance) && r.passed) {
    r.passed = false;
    r.counterexample = "draw " + std::to_string(draw) + ": " + what + " (error " + fmt(err) + ")";
  }
}

// Linear scorer with either small integer weights (lots of ties) or
// continuous ones.
Model random_scorer(Index dim, Rng& rng) {
  Vector w(dim);
  if (std::bernoulli_distribution(0.5)(rng)) {
    std::uniform_int_distribution<int> c(-2, 2);
    for (Index k = 0; k < dim; ++k) w[k] = c(rng);
  } else {
    std::normal_distribution<double> g;
    for (Index k = 0; k < dim; ++k) w[k] = g(rng);
  }
  return Model::linear(w);
}

std::pair<double, double> random_thetas(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double ta = u(rng), tb = u(rng);
  if (ta < tb) std::swap(ta, tb);
  if (ta == tb) ta = std::min(1.0, tb + 0.5);
  return {ta, tb};
}

DiscretePopulation random_pop(Rng& rng, Index& dim) {
  dim = std::uniform_int_distribution<Index>(1, 3)(rng);
  const Index k = std::uniform_int_distribution<Index>(1, 20)(rng);
  return random_discrete_population(k, dim, rng);
}

Vector random_scores(Index n, Rng& rng) {
  Vector s(n);
  if (std::bernoulli_distribution(0.5)(rng)) {
    std::uniform_int_distribution<int> c(0, 5);
    for (Index i = 0; i < n; ++i) s[i] = c(rng);
  } else {
    std::normal_distribution<double> g;
    for (Index i = 0; i < n; ++i) s[i] = g(rng);
  }
  return s;
}

InstanceSet random_set(Index n, Index d, Role role, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  FeatureMatrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) x(i, k) = u(rng);
  return {x, role};
}

std::set<int> argmin_set(const std::vector<double>& v, double tol) {
  const double lo = *std::min_element(v.begin(), v.end());
  std::set<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] <= lo + tol) out.insert(static_cast<int>(i));
  return out;
}

}  // namespace

SuiteResult verify_contaminated_identity(int draws, std::uint64_t seed, double b_offset) {
  SuiteResult r{"contaminated risk identity R_AB = a R_PN + b", true, draws, 0.0, 1e-12, ""};
  Rng rng(seed);
  const auto loss = SurrogateLoss::zero_one();
  for (int t = 0; t < draws; ++t) {
    Index dim = 0;
    const auto pop = random_pop(rng, dim);
    const auto [ta, tb] = random_thetas(rng);
    const MixtureSpec mix(ta, tb);
    const ExactRisks e = enumerate_exact_risk(pop, mix, random_scorer(dim, rng), loss);
    record(r, t, std::abs(e.r_ab - (mix.a() * e.r_pn + mix.b() + b_offset)),
           "theta_a=" + fmt(ta) + " theta_b=" + fmt(tb) + " R_AB=" + fmt(e.r_ab) + " R_PN=" + fmt(e.r_pn));
  }
  return r;
}

SuiteResult verify_argmin_invariance(int grids, int candidates, std::uint64_t seed) {
  SuiteResult r{"argmin of R_AB equals argmin of R_PN", true, grids, 0.0, 0.0, ""};
  Rng rng(seed);
  const auto loss = SurrogateLoss::zero_one();
  for (int t = 0; t < grids; ++t) {
    Index dim = 0;
    const auto pop = random_pop(rng, dim);
    const auto [ta, tb] = random_thetas(rng);
    const MixtureSpec mix(ta, tb);
    std::vector<double> rab, rpn;
    for (int c = 0; c < candidates; ++c) {
      const ExactRisks e = enumerate_exact_risk(pop, mix, random_scorer(dim, rng), loss);
      rab.push_back(e.r_ab);
      rpn.push_back(e.r_pn);
    }
    // Ties are resolved on the scale of each risk; R_AB differences shrink by a.
    const bool same = argmin_set(rab, 1e-12) == argmin_set(rpn, 1e-12 / mix.a());
    record(r, t, same ? 0.0 : 1.0, "argmin sets differ at theta_a=" + fmt(ta) + " theta_b=" + fmt(tb));
  }
  return r;
}

SuiteResult verify_pu_decomposition(int draws, std::uint64_t seed) {
  SuiteResult r{"R_PU + R_UN - 1/2 = R_PN", true, draws, 0.0, 1e-12, ""};
  Rng rng(seed);
  const auto loss = SurrogateLoss::zero_one();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < draws; ++t) {
    Index dim = 0;
    const auto pop = random_pop(rng, dim);
    const double pi = u(rng);
    const Vector s = random_scorer(dim, rng).scores(pop.support);
    const Vector wu = pop.mixture_weights(pi);
    const double r_pu = enumerate_pair_risk(s, pop.pos_weights, wu, loss);
    const double r_un = enumerate_pair_risk(s, wu, pop.neg_weights, loss);
    const double r_pn = enumerate_pair_risk(s, pop.pos_weights, pop.neg_weights, loss);
    record(r, t, std::abs(r_pu + r_un - 0.5 - r_pn), "pi_u=" + fmt(pi));
  }
  return r;
}

SuiteResult verify_noisy_ssl_recovery(int draws_per_cell, std::uint64_t seed, double b_offset) {
  SuiteResult r{"noisy PNU risk recovers R_PN", true, 0, 0.0, 1e-10, ""};
  Rng rng(seed);
  const auto loss = SurrogateLoss::zero_one();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int draw = 0;
  for (int ip = 1; ip <= 4; ++ip) {
    for (int in = 1; in <= 4; ++in) {
      const double ep = ip / 10.0, en = in / 10.0;
      const MixtureSpec mix = MixtureSpec::noisy(ep, en);
      for (int t = 0; t < draws_per_cell; ++t, ++draw) {
        Index dim = 0;
        const auto pop = random_pop(rng, dim);
        const double pi = u(rng);
        const Vector s = random_scorer(dim, rng).scores(pop.support);
        const Vector wp = pop.mixture_weights(mix.theta_a()), wn = pop.mixture_weights(mix.theta_b());
        const Vector wu = pop.mixture_weights(pi);
        const double r_pu = enumerate_pair_risk(s, wp, wu, loss);
        const double r_un = enumerate_pair_risk(s, wu, wn, loss);
        const double r_pn = enumerate_pair_risk(s, pop.pos_weights, pop.neg_weights, loss);
        const double via_u = (r_pu + r_un - 0.5 - mix.b() - b_offset) / mix.a();
        const double via_pn = recover_true_risk(enumerate_pair_risk(s, wp, wn, loss) - b_offset, mix);
        record(r, draw, std::abs(via_u - r_pn), "eta_p=" + fmt(ep) + " eta_n=" + fmt(en) + " via U");
        record(r, draw, std::abs(via_pn - r_pn), "eta_p=" + fmt(ep) + " eta_n=" + fmt(en) + " via P~N~");
      }
    }
  }
  r.draws = draw;
  return r;
}

SuiteResult verify_trim_equivalence(int draws, std::uint64_t seed) {
  SuiteResult r{"trimming by instance loss equals trimming by score", true, draws, 0.0, 0.0, ""};
  Rng rng(seed);
  const SurrogateLoss losses[] = {SurrogateLoss::squared(), SurrogateLoss::logistic(), SurrogateLoss::hinge()};
  std::uniform_int_distribution<Index> size(1, 20);
  std::uniform_real_distribution<double> frac(0.0, 0.6);
  for (int t = 0; t < draws; ++t) {
    const auto& loss = losses[t % 3];
    const Index m = size(rng), n = size(rng);
    double alpha = frac(rng), beta = frac(rng);
    if (floor_count(1.0 - beta, m) < 1) beta = 0.0;
    if (floor_count(1.0 - alpha, n) < 1) alpha = 0.0;
    InstanceSet xa, xb;
    Model model = Model::linear(Vector::Ones(1));
    if (loss.kind == LossKind::kSquared) {
      // scores in [0, 1) keep every pair margin where squared loss decreases
      xa = random_set(m, 1, Role::kNoisyP, rng, 0.0, 1.0);
      xb = random_set(n, 1, Role::kNoisyN, rng, 0.0, 1.0);
    } else {
      const Index d = std::uniform_int_distribution<Index>(1, 3)(rng);
      xa = random_set(m, d, Role::kNoisyP, rng);
      xb = random_set(n, d, Role::kNoisyN, rng);
      model = random_scorer(d, rng);
    }
    const auto eq = oracle::exhaustive_trim_equiv_detail(xa, xb, model, loss, alpha, beta);
    record(r, t, eq.equal ? 0.0 : std::abs(eq.by_score - eq.by_instance_loss),
           std::string(to_string(loss.kind)) + " m=" + std::to_string(m) + " n=" + std::to_string(n) +
               " alpha=" + fmt(alpha) + " beta=" + fmt(beta));
  }
  return r;
}

SuiteResult verify_gamma_formula(int draws, std::uint64_t seed) {
  SuiteResult r{"variance-optimal gamma formula", true, draws + 2, 0.0, 1e-9, ""};
  record(r, -2, std::abs(optimal_gamma(0.3, 0.0) - 0.0), "zero covariance gives gamma 0");
  record(r, -1, std::abs(optimal_gamma(0.3, 0.6) - 2.0), "psi_pnu = 2 psi_pn gives gamma 2");
  Rng rng(seed);
  const auto loss = SurrogateLoss::logistic();
  std::uniform_int_distribution<Index> size(2, 15);
  for (int t = 0; t < draws; ++t) {
    const Index m = size(rng), n = size(rng), nu = size(rng) * 3;
    const Index d = 2;
    const InstanceSet xp = random_set(m, d, Role::kNoisyP, rng), xn = random_set(n, d, Role::kNoisyN, rng);
    const InstanceSet xu = random_set(nu, d, Role::kU, rng);
    const Model model = random_scorer(d, rng);
    const GammaEstimate est = variance_optimal_gamma(xp, xn, xu, model, loss, 0);
    // plain loops over the definitions
    const Vector sp = model.scores(xp.features), sn = model.scores(xn.features), su = model.scores(xu.features);
    double mean = 0.0;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) mean += loss_value(loss, sp[i] - sn[j]);
    mean /= static_cast<double>(m * n);
    double var = 0.0;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) var += std::pow(loss_value(loss, sp[i] - sn[j]) - mean, 2);
    var /= static_cast<double>(m * n);
    auto shared_cov = [&](const Vector& own, const Vector& other, bool own_first) {
      const Index k = own.size();
      std::vector<double> h(static_cast<std::size_t>(k)), g(static_cast<std::size_t>(k));
      for (Index i = 0; i < k; ++i) {
        double hs = 0.0, gs = 0.0;
        for (Index j = 0; j < other.size(); ++j)
          hs += loss_value(loss, own_first ? own[i] - other[j] : other[j] - own[i]);
        for (Index j = 0; j < su.size(); ++j) gs += loss_value(loss, own_first ? own[i] - su[j] : su[j] - own[i]);
        h[static_cast<std::size_t>(i)] = hs / static_cast<double>(other.size());
        g[static_cast<std::size_t>(i)] = gs / static_cast<double>(su.size());
      }
      double gm = 0.0;
      for (double v : g) gm += v;
      gm /= static_cast<double>(k);
      double c = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) c += (h[i] - mean) * (g[i] - gm);
      return c / static_cast<double>(k);
    };
    const double tau_a = shared_cov(sp, sn, true), tau_b = shared_cov(sn, sp, false);
    const double psi_pn = var / static_cast<double>(m * n);
    const double psi_pnu = tau_a / static_cast<double>(m) + tau_b / static_cast<double>(n);
    const double expect = psi_pnu / (psi_pnu - psi_pn);
    const double scale = std::max(1.0, std::abs(expect));
    record(r, t, std::abs(est.gamma_star - expect) / scale, "m=" + std::to_string(m) + " n=" + std::to_string(n));
    record(r, t, std::abs(est.recommended_gamma - std::clamp(expect, 0.0, 1.0)), "clamped gamma");
  }
  return r;
}

SuiteResult verify_pair_risk(int draws, std::uint64_t seed) {
  SuiteResult r{"pairwise risk matches naive double loop", true, draws, 0.0, 1e-12, ""};
  Rng rng(seed);
  const SurrogateLoss losses[] = {SurrogateLoss::zero_one(), SurrogateLoss::squared(), SurrogateLoss::logistic(),
                                  SurrogateLoss::hinge()};
  std::uniform_int_distribution<Index> size(1, 20), dim(1, 4);
  for (int t = 0; t < draws; ++t) {
    const auto& loss = losses[t % 4];
    const Index d = dim(rng);
    const InstanceSet xa = random_set(size(rng), d, Role::kNoisyP, rng);
    const InstanceSet xb = random_set(size(rng), d, Role::kNoisyN, rng);
    const Model model = t % 2 ? Model::initialized(Architecture::kMlp1, d, 4, rng()) : random_scorer(d, rng);
    const double fast = pairwise_risk(xa, xb, model, loss).value;
    const double slow = oracle::naive_pair_risk(xa, xb, model, loss);
    record(r, t, std::abs(fast - slow), std::string(to_string(loss.kind)) + " " + std::string(to_string(model.architecture())));
  }
  return r;
}

SuiteResult verify_metrics(int draws, std::uint64_t seed) {
  SuiteResult r{"metrics match brute-force ROC enumeration", true, draws, 0.0, 1e-12, ""};
  Rng rng(seed);
  std::uniform_int_distribution<Index> size(1, 30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < draws; ++t) {
    const Index m = size(rng), n = size(rng);
    const ScorePair sp{random_scores(m, rng), random_scores(n, rng)};
    const std::string tag = "m=" + std::to_string(m) + " n=" + std::to_string(n);
    const double auc = auc_exact(sp);
    record(r, t, std::abs(auc - oracle::brute_auc(sp.pos, sp.neg)), tag + " auc");

    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) hi = 1.0, lo = 0.0;
    record(r, t, std::abs(opauc_eval(sp, lo, hi) - oracle::brute_opauc(sp.pos, sp.neg, lo, hi)),
           tag + " opauc [" + fmt(lo) + ", " + fmt(hi) + "]");
    record(r, t, std::abs(opauc_eval(sp, 0.0, 1.0) - auc), tag + " opauc full range");

    const double ta = std::max(1e-3, u(rng)), tb = u(rng) * 0.999;
    record(r, t, std::abs(tpauc_eval(sp, ta, tb) - oracle::brute_tpauc(sp.pos, sp.neg, ta, tb)),
           tag + " tpauc alpha=" + fmt(ta) + " beta=" + fmt(tb));
    record(r, t, std::abs(tpauc_eval(sp, 1.0, 0.0) - auc), tag + " tpauc full range");

    double ra = u(rng) * 0.9, rb = u(rng) * 0.9;
    if (floor_count(1.0 - rb, m) < 1) rb = 0.0;
    if (floor_count(1.0 - ra, n) < 1) ra = 0.0;
    record(r, t, std::abs(rpauc_eval(sp, ra, rb) - oracle::brute_rpauc(sp.pos, sp.neg, ra, rb)),
           tag + " rpauc alpha=" + fmt(ra) + " beta=" + fmt(rb));
    record(r, t, rpauc_eval(sp, 0.0, 0.0) == auc ? 0.0 : INFINITY, tag + " rpauc(0, 0) differs from auc");
  }
  return r;
}

SuiteResult verify_mixture_coefficients(int draws, std::uint64_t seed) {
  SuiteResult r{"realized scenario coefficients", true, draws, 0.0, 0.0, ""};
  Rng rng(seed);
  const PopulationSpec pop = PopulationSpec::isotropic(2, 1.5, 0.5);
  std::uniform_int_distribution<Index> size(20, 200);
  std::uniform_real_distribution<double> eta(0.0, 0.45), ratio(0.05, 0.9), wit(0.05, 1.0);
  auto count = [](const InstanceSet& s, int label) {
    Index c = 0;
    for (int v : s.truth) c += (v == label);
    return c;
  };
  for (int t = 0; t < draws; ++t) {
    const CleanSample cs = sample_clean(pop, size(rng), size(rng), rng());
    {
      const NoisySets ns = corrupt_noisy(cs.pos, cs.neg, eta(rng), eta(rng), rng());
      const double ep = static_cast<double>(count(ns.noisy_p, -1)) / static_cast<double>(ns.noisy_p.size());
      const double en = static_cast<double>(count(ns.noisy_n, 1)) / static_cast<double>(ns.noisy_n.size());
      const MixtureSpec m = ns.stats.mixture();
      record(r, t, m.a() == 1.0 - ep - en ? 0.0 : std::abs(m.a() - (1.0 - ep - en)), "noisy a = 1 - eta_p - eta_n");
      record(r, t, m.b() == (1.0 - m.a()) / 2.0 ? 0.0 : 1.0, "noisy b");
    }
    {
      const PUSets pu = make_pu(cs.pos, cs.neg, ratio(rng), rng());
      const double pi_n = static_cast<double>(count(pu.unlabeled, -1)) / static_cast<double>(pu.unlabeled.size());
      const MixtureSpec m = pu.mixture();
      record(r, t, m.a() == pi_n ? 0.0 : std::abs(m.a() - pi_n), "pu a = pi_n");
    }
    {
      const Index bag = std::uniform_int_distribution<Index>(1, 8)(rng);
      const Index pb = std::uniform_int_distribution<Index>(1, 5)(rng);
      const Index nb = std::uniform_int_distribution<Index>(1, 5)(rng);
      const CleanSample pool = sample_clean(pop, pb * bag, (pb + nb) * bag, rng());
      const MILSets mil = make_mil(pool.pos, pool.neg, pb, nb, bag, wit(rng), rng());
      const double ep = static_cast<double>(count(mil.pos_bags, -1)) / static_cast<double>(mil.pos_bags.size());
      const MixtureSpec m = mil.mixture();
      record(r, t, m.a() == 1.0 - ep ? 0.0 : std::abs(m.a() - (1.0 - ep)), "mil a = 1 - eta_p");
      record(r, t, count(mil.neg_bags, 1) == 0 ? 0.0 : 1.0, "negative bag holds a positive");
    }
  }
  return r;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, double b_offset) {
  return {verify_contaminated_identity(100, seed + 1, b_offset),
          verify_argmin_invariance(50, 10, seed + 2),
          verify_pu_decomposition(100, seed + 3),
          verify_noisy_ssl_recovery(10, seed + 4, b_offset),
          verify_trim_equivalence(100, seed + 5),
          verify_gamma_formula(20, seed + 6),
          verify_pair_risk(200, seed + 7),
          verify_metrics(200, seed + 8),
          verify_mixture_coefficients(50, seed + 9)};
}

std::string summary_line(const SuiteResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.draws << " draws, max error " << short_fmt(r.max_error)
     << ", tolerance " << short_fmt(r.tolerance) << ")";
  if (!r.passed) os << "\n     counterexample " << r.counterexample;
  return os.str();
}

bool cmd_verify(KeyValueConfig cfg, const CommandOptions& opts, std::ostream& out, double perturb_b) {
  if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 20240601));
  bool ok = true;
  std::ostringstream text;
  for (const auto& r : run_all_suites(seed, perturb_b)) {
    text << summary_line(r) << '\n';
    ok = ok && r.passed;
  }
  text << (ok ? "all suites passed" : "verification FAILED") << '\n';
  out << text.str();
  if (opts.out) {
    std::ofstream f(*opts.out, std::ios::binary);
    if (!f) throw DataError("cannot write " + opts.out->string());
    f << text.str();
  }
  return ok;
}

}  // namespace wsauc::cli
