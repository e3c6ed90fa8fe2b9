#include "wsauc/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wsauc/errors.hpp"
#include "wsauc/ranking.hpp"

namespace wsauc {

std::vector<PairTerm> make_pair_plan(Scenario scenario, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("make_pair_plan: gamma must lie in [0, 1]");
  auto three_set = [gamma](Role a, Role b) {
    const double total = gamma + 2.0 * (1.0 - gamma);
    std::vector<PairTerm> plan;
    if (gamma > 0.0) plan.push_back({a, b, gamma / total});
    if (gamma < 1.0) {
      plan.push_back({a, Role::kU, (1.0 - gamma) / total});
      plan.push_back({Role::kU, b, (1.0 - gamma) / total});
    }
    return plan;
  };
  switch (scenario) {
    case Scenario::kSupervised: return {{Role::kP, Role::kN, 1.0}};
    case Scenario::kContaminated:
    case Scenario::kNoisy: return {{Role::kNoisyP, Role::kNoisyN, 1.0}};
    case Scenario::kPU: return {{Role::kP, Role::kU, 1.0}};
    case Scenario::kMIL: return {{Role::kBagPositive, Role::kBagNegative, 1.0}};
    case Scenario::kSSL: return three_set(Role::kP, Role::kN);
    case Scenario::kNoisySSL: return three_set(Role::kNoisyP, Role::kNoisyN);
  }
  return {};
}

void TrainConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("TrainConfig: alpha must lie in [0, 1)");
  if (!(beta >= 0.0 && beta < 1.0)) throw InputError("TrainConfig: beta must lie in [0, 1)");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("TrainConfig: gamma must lie in [0, 1]");
  if (outer_rounds <= 0 || inner_rounds <= 0) throw InputError("TrainConfig: round counts must be positive");
  if (warmup_rounds < 0) throw InputError("TrainConfig: warmup_rounds must be non-negative");
  if (batch_a <= 0 || batch_b <= 0) throw InputError("TrainConfig: batch sizes must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw InputError("TrainConfig: learning rate must be positive");
  if (!loss.differentiable()) throw UnsupportedOperation("TrainConfig: training needs a differentiable loss");
  if (pair_plan.empty()) throw InputError("TrainConfig: empty pair plan");
  double total = 0.0;
  for (const auto& term : pair_plan) {
    if (!(term.weight >= 0.0)) throw InputError("TrainConfig: negative pair weight");
    total += term.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("TrainConfig: pair weights must sum to 1");
}

double instance_loss(Index index, Side side, const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                     const SurrogateLoss& loss) {
  const InstanceSet& own = side == Side::kA ? xa : xb;
  const InstanceSet& other = side == Side::kA ? xb : xa;
  if (index < 0 || index >= own.size()) throw InputError("instance_loss: index out of range");
  if (other.empty()) throw InputError("instance_loss: opposite set is empty");
  const double s = model.score(own.row(index).transpose());
  const Vector so = model.scores(other.features);
  double sum = 0.0;
  for (Index j = 0; j < so.size(); ++j)
    sum += side == Side::kA ? loss_value(loss, s - so[j]) : loss_value(loss, so[j] - s);
  return sum / static_cast<double>(so.size());
}

TrimmedPair trim_indices(const Eigen::Ref<const Vector>& scores_a, const Eigen::Ref<const Vector>& scores_b,
                         double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0))
    throw InputError("trim: alpha and beta must lie in [0, 1)");
  const Index keep_a = floor_count(1.0 - beta, scores_a.size());
  const Index keep_b = floor_count(1.0 - alpha, scores_b.size());
  if (keep_a < 1)
    throw DegenerateInputError("trim: side A keeps floor((1-beta)*" + std::to_string(scores_a.size()) +
                               ") = 0 instances");
  if (keep_b < 1)
    throw DegenerateInputError("trim: side B keeps floor((1-alpha)*" + std::to_string(scores_b.size()) +
                               ") = 0 instances");
  return {top_k_indices(scores_a, keep_a), bottom_k_indices(scores_b, keep_b)};
}

std::pair<InstanceSet, InstanceSet> trim_sets(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                                              double alpha, double beta) {
  const TrimmedPair t = trim_indices(model.scores(xa.features), model.scores(xb.features), alpha, beta);
  return {xa.subset(t.kept_a), xb.subset(t.kept_b)};
}

RiskValue rpauc_empirical_risk(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                               const SurrogateLoss& loss, double alpha, double beta) {
  const Vector sa = model.scores(xa.features);
  const Vector sb = model.scores(xb.features);
  const TrimmedPair t = trim_indices(sa, sb, alpha, beta);
  const auto pairs = static_cast<std::int64_t>(t.kept_a.size() * t.kept_b.size());
  return {mean_pair_loss(gather(sa, t.kept_a), gather(sb, t.kept_b), loss), pairs, Scenario::kContaminated};
}

namespace {

struct BatchEval {
  Vector grad;
  double risk;
};

BatchEval eval_batch(const FeatureMatrix& batch_a, const FeatureMatrix& batch_b, const Model& model,
                     const SurrogateLoss& loss) {
  if (batch_a.rows() == 0 || batch_b.rows() == 0) throw InputError("batch_grad: empty batch");
  if (!loss.differentiable()) throw UnsupportedOperation("batch_grad: zero_one loss has no gradient");
  const Vector sa = model.scores(batch_a);
  const Vector sb = model.scores(batch_b);
  if (!sa.allFinite() || !sb.allFinite()) throw NumericalError("batch_grad: non-finite scores");

  // d/dtheta l(s_i - t_j) = l'(z_ij) (grad s_i - grad t_j); collect the
  // per-instance coefficients first.
  Vector coef_a = Vector::Zero(sa.size());
  Vector coef_b = Vector::Zero(sb.size());
  double risk = 0.0;
  for (Index i = 0; i < sa.size(); ++i) {
    for (Index j = 0; j < sb.size(); ++j) {
      const double z = sa[i] - sb[j];
      const double d = loss_grad(loss, z);
      coef_a[i] += d;
      coef_b[j] += d;
      risk += loss_value(loss, z);
    }
  }
  const double pairs = static_cast<double>(sa.size()) * static_cast<double>(sb.size());
  Vector grad = Vector::Zero(model.params().size());
  for (Index i = 0; i < sa.size(); ++i) {
    if (coef_a[i] != 0.0) grad.noalias() += coef_a[i] * model.score_grad(batch_a.row(i).transpose());
  }
  for (Index j = 0; j < sb.size(); ++j) {
    if (coef_b[j] != 0.0) grad.noalias() -= coef_b[j] * model.score_grad(batch_b.row(j).transpose());
  }
  return {grad / pairs, risk / pairs};
}

FeatureMatrix rows_of(const FeatureMatrix& x, const std::vector<Index>& idx) {
  FeatureMatrix out(static_cast<Index>(idx.size()), x.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Index>(k)) = x.row(idx[k]);
  return out;
}

}  // namespace

Vector batch_grad(const FeatureMatrix& batch_a, const FeatureMatrix& batch_b, const Model& model,
                  const SurrogateLoss& loss) {
  return eval_batch(batch_a, batch_b, model, loss).grad;
}

std::uint64_t sampling_seed(std::uint64_t seed) { return seed + 0x9E3779B97F4A7C15ULL; }

TrainResult train(const RoleSets& datasets, const TrainConfig& config) {
  config.validate();
  std::vector<std::pair<const InstanceSet*, const InstanceSet*>> sets;
  Index dim = -1;
  for (const auto& term : config.pair_plan) {
    const auto ia = datasets.find(term.a);
    const auto ib = datasets.find(term.b);
    if (ia == datasets.end() || ib == datasets.end())
      throw InputError(std::string("train: pair plan needs role ") +
                       std::string(to_string(ia == datasets.end() ? term.a : term.b)) + " which was not provided");
    for (const InstanceSet* s : {&ia->second, &ib->second}) {
      s->validate();
      if (dim >= 0 && s->dim() != dim) throw InputError("train: instance sets differ in dimension");
      dim = s->dim();
    }
    // Fail before training if trimming would empty a side.
    if (floor_count(1.0 - config.beta, ia->second.size()) < 1)
      throw DegenerateInputError("train: beta trims every instance of " + std::string(to_string(term.a)));
    if (floor_count(1.0 - config.alpha, ib->second.size()) < 1)
      throw DegenerateInputError("train: alpha trims every instance of " + std::string(to_string(term.b)));
    sets.emplace_back(&ia->second, &ib->second);
  }

  Model model = Model::initialized(config.architecture, dim, config.hidden_width, config.seed);
  std::mt19937_64 rng(sampling_seed(config.seed));
  TrainTrace trace;
  const auto start = std::chrono::steady_clock::now();
  auto diverged = [](int t, int k, std::size_t p, const std::string& what) {
    return NumericalError("train: " + what + " at round " + std::to_string(t) + ", inner step " +
                          std::to_string(k) + ", pair " + std::to_string(p));
  };

  std::vector<TrimmedPair> pools(sets.size());
  for (int t = 0; t < config.outer_rounds; ++t) {
    for (std::size_t p = 0; p < sets.size(); ++p) {
      const Vector sa = model.scores(sets[p].first->features);
      const Vector sb = model.scores(sets[p].second->features);
      if (!sa.allFinite() || !sb.allFinite()) throw diverged(t, -1, p, "non-finite scores");
      const bool warm = t < config.warmup_rounds;
      pools[p] = trim_indices(sa, sb, warm ? 0.0 : config.alpha, warm ? 0.0 : config.beta);
      double full = std::numeric_limits<double>::quiet_NaN();
      if (config.track_full_risk) {
        full = mean_pair_loss(gather(sa, pools[p].kept_a), gather(sb, pools[p].kept_b), config.loss);
        if (!std::isfinite(full)) throw diverged(t, -1, p, "non-finite rpAUC risk");
      }
      trace.rounds.push_back({t, static_cast<int>(p), static_cast<Index>(pools[p].kept_a.size()),
                              static_cast<Index>(pools[p].kept_b.size()), full});
    }
    for (int k = 0; k < config.inner_rounds; ++k) {
      for (std::size_t p = 0; p < sets.size(); ++p) {
        const auto ba = sample_without_replacement(pools[p].kept_a, config.batch_a, rng);
        const auto bb = sample_without_replacement(pools[p].kept_b, config.batch_b, rng);
        BatchEval ev;
        try {
          ev = eval_batch(rows_of(sets[p].first->features, ba), rows_of(sets[p].second->features, bb), model,
                          config.loss);
        } catch (const NumericalError&) {
          throw diverged(t, k, p, "non-finite scores");
        }
        if (!std::isfinite(ev.risk) || !ev.grad.allFinite()) throw diverged(t, k, p, "non-finite batch risk");
        model.params().noalias() -= (config.learning_rate * config.pair_plan[p].weight) * ev.grad;
        if (!model.params().allFinite()) throw diverged(t, k, p, "non-finite parameters");
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        trace.steps.push_back({t, k, static_cast<int>(p), static_cast<Index>(pools[p].kept_a.size()),
                               static_cast<Index>(pools[p].kept_b.size()), ev.risk, elapsed});
      }
    }
  }
  for (const auto& [xa, xb] : sets) {
    trace.final_rpauc_risk.push_back(
        rpauc_empirical_risk(*xa, *xb, model, config.loss, config.alpha, config.beta).value);
  }
  return {std::move(model), std::move(trace)};
}

double bag_score(const Model& model, const FeatureMatrix& bag) {
  if (bag.rows() == 0) throw InputError("bag_score: empty bag");
  return model.scores(bag).maxCoeff();
}

}  // namespace wsauc
