#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wsauc/loss.hpp"
#include "wsauc/model.hpp"
#include "wsauc/risks.hpp"
#include "wsauc/types.hpp"

namespace wsauc {

/// One (X_A, X_B) set pair of the objective and its weight.
struct PairTerm {
  Role a;
  Role b;
  double weight;
  friend bool operator==(const PairTerm&, const PairTerm&) = default;
};

/// Set pairs for a scenario. Three-set scenarios weight (A,B), (A,U), (U,B)
/// by (gamma, 1-gamma, 1-gamma) normalized to sum to one; zero-weight terms
/// are dropped.
std::vector<PairTerm> make_pair_plan(Scenario scenario, double gamma);

struct TrainConfig {
  double alpha = 0.0;  // fraction of X_B trimmed from the top
  double beta = 0.0;   // fraction of X_A trimmed from the bottom
  double gamma = 0.45;
  int outer_rounds = 50;
  int inner_rounds = 20;
  /// Leading outer rounds that keep every instance. Trimming a randomly
  /// initialized scorer can lock in a reversed ranking.
  int warmup_rounds = 0;
  Index batch_a = 64;
  Index batch_b = 64;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  SurrogateLoss loss = SurrogateLoss::logistic();
  std::vector<PairTerm> pair_plan;
  Architecture architecture = Architecture::kLinear;
  Index hidden_width = Model::kDefaultHiddenWidth;
  /// Record the full-data rpAUC risk of each pair once per outer round.
  bool track_full_risk = true;

  void validate() const;
};

using RoleSets = std::map<Role, InstanceSet>;

struct StepRecord {
  int round;
  int inner;
  int pair;
  Index kept_a;
  Index kept_b;
  double batch_risk;  // surrogate risk on the batch before the update
  double elapsed_s;
};

struct RoundRecord {
  int round;
  int pair;
  Index kept_a;
  Index kept_b;
  double rpauc_risk;  // NaN unless track_full_risk
};

struct TrainTrace {
  std::vector<StepRecord> steps;
  std::vector<RoundRecord> rounds;
  /// rpAUC surrogate risk of each pair under the final model.
  std::vector<double> final_rpauc_risk;
};

struct TrainResult {
  Model model;
  TrainTrace trace;
};

enum class Side { kA, kB };

/// Mean pairwise loss of one instance against the whole opposite set.
double instance_loss(Index index, Side side, const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                     const SurrogateLoss& loss);

struct TrimmedPair {
  std::vector<Index> kept_a;  // ascending row indices into X_A
  std::vector<Index> kept_b;
};

/// Keep the floor((1-beta)|A|) highest scores of A and the floor((1-alpha)|B|)
/// lowest of B. Throws DegenerateInputError naming the side that empties.
TrimmedPair trim_indices(const Eigen::Ref<const Vector>& scores_a, const Eigen::Ref<const Vector>& scores_b,
                         double alpha, double beta);

std::pair<InstanceSet, InstanceSet> trim_sets(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                                              double alpha, double beta);

/// Pairwise surrogate risk over the trimmed sets.
RiskValue rpauc_empirical_risk(const InstanceSet& xa, const InstanceSet& xb, const Model& model,
                               const SurrogateLoss& loss, double alpha, double beta);

/// Gradient w.r.t. params of the mean pairwise loss over batch_a x batch_b.
Vector batch_grad(const FeatureMatrix& batch_a, const FeatureMatrix& batch_b, const Model& model,
                  const SurrogateLoss& loss);

/// Robust weakly supervised AUC optimization. Each outer round re-trims
/// every set pair under the current model; each inner round samples a batch
/// pair from the kept pools of every pair in turn and takes an SGD step
/// scaled by the pair weight.
TrainResult train(const RoleSets& datasets, const TrainConfig& config);

/// Bag score: the maximum instance score.
double bag_score(const Model& model, const FeatureMatrix& bag);

/// Stream used for batch sampling in train(), derived from the run seed.
std::uint64_t sampling_seed(std::uint64_t seed);

/// Draw min(k, pool.size()) entries of pool without replacement by a partial
/// Fisher-Yates shuffle of a copy; the order of the draw is kept.
template <typename Rng>
std::vector<Index> sample_without_replacement(const std::vector<Index>& pool, Index k, Rng& rng);

}  // namespace wsauc

#include "wsauc/detail/sampling.hpp"
