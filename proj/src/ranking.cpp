#include "wsauc/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wsauc/errors.hpp"

namespace wsauc {

namespace {
constexpr double kCountSlack = 1e-9;

template <typename Better>
std::vector<Index> select_k(const Eigen::Ref<const Vector>& scores, Index k, Better better) {
  const Index n = scores.size();
  if (k < 0 || k > n) throw InputError("select_k: k out of range");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto cmp = [&](Index i, Index j) {
    if (scores[i] != scores[j]) return better(scores[i], scores[j]);
    return i < j;
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), cmp);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}
}  // namespace

Index floor_count(double fraction, Index n) {
  return static_cast<Index>(std::floor(fraction * static_cast<double>(n) + kCountSlack));
}

Index ceil_count(double fraction, Index n) {
  return static_cast<Index>(std::ceil(fraction * static_cast<double>(n) - kCountSlack));
}

std::vector<Index> top_k_indices(const Eigen::Ref<const Vector>& scores, Index k) {
  return select_k(scores, k, [](double a, double b) { return a > b; });
}

std::vector<Index> bottom_k_indices(const Eigen::Ref<const Vector>& scores, Index k) {
  return select_k(scores, k, [](double a, double b) { return a < b; });
}

Vector gather(const Eigen::Ref<const Vector>& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = v[idx[k]];
  return out;
}

}  // namespace wsauc
