#include "wsauc/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "wsauc/errors.hpp"
#include "wsauc/ranking.hpp"

namespace wsauc {

void ScorePair::validate() const {
  if (pos.size() == 0 || neg.size() == 0) throw InputError("ScorePair: empty side");
  if (!pos.allFinite() || !neg.allFinite()) throw InputError("ScorePair: non-finite score");
}

double auc_exact(const ScorePair& sp) {
  sp.validate();
  const Index m = sp.pos.size(), n = sp.neg.size(), total = m + n;
  std::vector<Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Index{0});
  auto value = [&](Index k) { return k < m ? sp.pos[k] : sp.neg[k - m]; };
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return value(a) < value(b); });

  // Twice the rank sum of positives; tied groups share the midrank.
  double twice_rank_sum = 0.0;
  for (Index start = 0; start < total;) {
    Index end = start + 1;
    while (end < total && value(order[end]) == value(order[start])) ++end;
    const double twice_midrank = static_cast<double>(start + 1 + end);
    for (Index k = start; k < end; ++k) {
      if (order[k] < m) twice_rank_sum += twice_midrank;
    }
    start = end;
  }
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  const double twice_u = twice_rank_sum - md * (md + 1.0);
  return twice_u / (2.0 * md * nd);
}

double opauc_eval(const ScorePair& sp, double alpha, double beta) {
  sp.validate();
  if (!(alpha >= 0.0 && alpha < beta && beta <= 1.0))
    throw InputError("opauc_eval: requires 0 <= alpha < beta <= 1");
  const Index m = sp.pos.size(), n = sp.neg.size();
  const double md = static_cast<double>(m), nd = static_cast<double>(n);

  std::vector<std::pair<double, int>> pts;  // (score, +1 pos / -1 neg)
  pts.reserve(static_cast<std::size_t>(m + n));
  for (Index i = 0; i < m; ++i) pts.emplace_back(sp.pos[i], 1);
  for (Index j = 0; j < n; ++j) pts.emplace_back(sp.neg[j], -1);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  // Segments lying wholly inside [alpha, beta] are accumulated exactly in
  // units of 1/(2mn); clipped ones in plain area.
  double full_units = 0.0;
  double partial_area = 0.0;
  Index tp = 0, fp = 0;
  for (std::size_t s = 0; s < pts.size();) {
    std::size_t e = s;
    Index dp = 0, dn = 0;
    while (e < pts.size() && pts[e].first == pts[s].first) {
      (pts[e].second > 0 ? dp : dn) += 1;
      ++e;
    }
    if (dn > 0) {
      const double f0 = static_cast<double>(fp) / nd, f1 = static_cast<double>(fp + dn) / nd;
      const double t0 = static_cast<double>(tp) / md, t1 = static_cast<double>(tp + dp) / md;
      const double lo = std::max(f0, alpha), hi = std::min(f1, beta);
      if (f0 >= alpha && f1 <= beta) {
        full_units += static_cast<double>(2 * tp + dp) * static_cast<double>(dn);
      } else if (hi > lo) {
        auto tpr_at = [&](double f) { return t0 + (t1 - t0) * (f - f0) / (f1 - f0); };
        partial_area += 0.5 * (tpr_at(lo) + tpr_at(hi)) * (hi - lo);
      }
    }
    tp += dp;
    fp += dn;
    s = e;
  }
  const double area = full_units / (2.0 * md * nd) + partial_area;
  return area / (beta - alpha);
}

double tpauc_eval(const ScorePair& sp, double alpha, double beta) {
  sp.validate();
  if (!(alpha > 0.0 && alpha <= 1.0 && beta >= 0.0 && beta < 1.0))
    throw InputError("tpauc_eval: requires 0 < alpha <= 1 and 0 <= beta < 1");
  const Index keep_pos = std::max<Index>(1, ceil_count(1.0 - beta, sp.pos.size()));
  const Index keep_neg = std::max<Index>(1, ceil_count(alpha, sp.neg.size()));
  return auc_exact({gather(sp.pos, bottom_k_indices(sp.pos, keep_pos)),
                    gather(sp.neg, top_k_indices(sp.neg, keep_neg))});
}

double rpauc_eval(const ScorePair& sp, double alpha, double beta) {
  sp.validate();
  if (!(alpha >= 0.0 && alpha < 1.0 && beta >= 0.0 && beta < 1.0))
    throw InputError("rpauc_eval: requires alpha, beta in [0, 1)");
  const Index keep_pos = floor_count(1.0 - beta, sp.pos.size());
  const Index keep_neg = floor_count(1.0 - alpha, sp.neg.size());
  if (keep_pos == 0) throw DegenerateInputError("rpauc_eval: trimming empties the positive side");
  if (keep_neg == 0) throw DegenerateInputError("rpauc_eval: trimming empties the negative side");
  return auc_exact({gather(sp.pos, top_k_indices(sp.pos, keep_pos)),
                    gather(sp.neg, bottom_k_indices(sp.neg, keep_neg))});
}

}  // namespace wsauc
