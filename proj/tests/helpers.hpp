#pragma once

#include <random>

#include "wsauc/model.hpp"
#include "wsauc/types.hpp"

namespace testing {

using namespace wsauc;

inline FeatureMatrix uniform_matrix(Index n, Index d, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  FeatureMatrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) x(i, k) = u(rng);
  return x;
}

inline InstanceSet uniform_set(Index n, Index d, Role role, std::mt19937_64& rng, double lo = -1.0,
                               double hi = 1.0) {
  return {uniform_matrix(n, d, rng, lo, hi), role};
}

inline Vector uniform_vector(Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Scores with many ties.
inline Vector tied_vector(Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(0, 4);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = c(rng);
  return v;
}

inline InstanceSet one_dim(std::initializer_list<double> values, Role role) {
  FeatureMatrix x(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) x(i++, 0) = v;
  return {x, role};
}

inline Model identity_scorer() { return Model::linear(Vector::Ones(1)); }

inline double rel_error(const Vector& a, const Vector& b) {
  const double scale = std::max({a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>(), 1e-8});
  return (a - b).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace testing
