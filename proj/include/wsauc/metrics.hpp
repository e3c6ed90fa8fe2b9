#pragma once

#include "wsauc/types.hpp"

namespace wsauc {

/// Scores of positives and negatives under some model.
struct ScorePair {
  Vector pos;
  Vector neg;

  /// Throws InputError when a side is empty or holds non-finite scores.
  void validate() const;
  ScorePair swapped() const { return {neg, pos}; }
};

/// Full AUC with half credit for ties, via the Mann-Whitney rank statistic.
double auc_exact(const ScorePair& sp);

/// One-way partial AUC over FPR in [alpha, beta], normalized by (beta - alpha).
/// The empirical ROC is the polyline through the per-threshold (FPR, TPR)
/// points; tied groups contribute diagonal segments.
double opauc_eval(const ScorePair& sp, double alpha, double beta);

/// Two-way partial AUC over FPR <= alpha and TPR >= beta: mean pairwise
/// correctness between the ceil((1 - beta) m) lowest-scored positives and the
/// ceil(alpha n) highest-scored negatives.
double tpauc_eval(const ScorePair& sp, double alpha, double beta);

/// Reversed two-way partial AUC: pairwise correctness between the
/// floor((1 - beta) m) highest-scored positives and the floor((1 - alpha) n)
/// lowest-scored negatives. Throws DegenerateInputError if a side empties.
double rpauc_eval(const ScorePair& sp, double alpha, double beta);

}  // namespace wsauc
