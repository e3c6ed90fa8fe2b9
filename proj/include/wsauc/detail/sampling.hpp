#pragma once

#include <algorithm>
#include <random>
#include <vector>

namespace wsauc {

template <typename Rng>
std::vector<Index> sample_without_replacement(const std::vector<Index>& pool, Index k, Rng& rng) {
  std::vector<Index> work = pool;
  const auto n = static_cast<Index>(work.size());
  k = std::min(k, n);
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(work[static_cast<std::size_t>(i)], work[static_cast<std::size_t>(pick(rng))]);
  }
  work.resize(static_cast<std::size_t>(k));
  return work;
}

}  // namespace wsauc
