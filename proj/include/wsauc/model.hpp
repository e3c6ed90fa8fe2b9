#pragma once

#include <cstdint>
#include <string_view>

#include "wsauc/types.hpp"

namespace wsauc {

enum class Architecture { kLinear, kMlp1 };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view name);

/// Scoring function f: R^d -> R.
///
/// linear: f(x) = w.x (no bias; pairwise differences cancel it).
/// mlp1:   f(x) = v.tanh(W x + c), params packed as [W row-major | c | v].
class Model {
 public:
  static constexpr Index kDefaultHiddenWidth = 32;

  Model(Architecture arch, Index input_dim, Index hidden_width = kDefaultHiddenWidth);
  Model(Architecture arch, Index input_dim, Index hidden_width, Vector params);

  static Model linear(Vector weights);

  /// Parameters uniform in [-1/sqrt(d), 1/sqrt(d)].
  static Model initialized(Architecture arch, Index input_dim, Index hidden_width, std::uint64_t seed);

  static Index param_count(Architecture arch, Index input_dim, Index hidden_width);

  Architecture architecture() const { return arch_; }
  Index input_dim() const { return input_dim_; }
  Index hidden_width() const { return hidden_width_; }

  const Vector& params() const { return params_; }
  Vector& params() { return params_; }
  void set_params(Vector p);

  double score(const Eigen::Ref<const Vector>& x) const;
  /// d score / d params, same length as params().
  Vector score_grad(const Eigen::Ref<const Vector>& x) const;

  /// Scores of every row.
  Vector scores(const FeatureMatrix& x) const;

  friend bool operator==(const Model& a, const Model& b) {
    return a.arch_ == b.arch_ && a.input_dim_ == b.input_dim_ && a.hidden_width_ == b.hidden_width_ &&
           a.params_ == b.params_;
  }

 private:
  void check_input(Index d) const;

  Architecture arch_;
  Index input_dim_;
  Index hidden_width_;
  Vector params_;
};

}  // namespace wsauc
