#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wsauc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
/// One instance per row.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Role { kP, kN, kU, kNoisyP, kNoisyN, kBagPositive, kBagNegative };

std::string_view to_string(Role role);
Role parse_role(std::string_view name);
inline bool is_bag_role(Role r) { return r == Role::kBagPositive || r == Role::kBagNegative; }

/// Role-tagged collection of feature vectors of a common dimension.
///
/// `bag_ids` is populated iff the role is a bag role. `truth` (+1/-1) and
/// `ids` are optional provenance for synthetic data; both are either empty or
/// cover every row.
struct InstanceSet {
  FeatureMatrix features;
  Role role = Role::kP;
  std::vector<int> bag_ids;
  std::vector<int> truth;
  std::vector<std::size_t> ids;

  InstanceSet() = default;
  InstanceSet(FeatureMatrix x, Role r) : features(std::move(x)), role(r) {}

  Index size() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  bool empty() const { return features.rows() == 0; }
  auto row(Index i) const { return features.row(i); }

  /// Throws InputError on non-finite features, inconsistent side vectors or
  /// (unless allowed) an empty set.
  void validate(bool allow_empty = false) const;

  /// Rows in the given order; side vectors follow.
  InstanceSet subset(std::span<const Index> rows) const;

  /// Count of rows with truth == +1. Requires truth to be populated.
  Index count_true_positives() const;
};

/// Concatenate sets of the same dimension under a new role.
InstanceSet concat(const InstanceSet& first, const InstanceSet& second, Role role);

/// Two contaminated distributions p_A = theta_a p_P + (1 - theta_a) p_N and
/// p_B = theta_b p_P + (1 - theta_b) p_N, with theta_a > theta_b.
/// Their pairwise risk satisfies R_AB = a R_PN + b.
class MixtureSpec {
 public:
  MixtureSpec(double theta_a, double theta_b);

  static MixtureSpec clean() { return {1.0, 0.0}; }
  /// Noisy labels: theta_a = 1 - eta_p, theta_b = eta_n.
  static MixtureSpec noisy(double eta_p, double eta_n) { return {1.0 - eta_p, eta_n}; }
  /// Positive vs unlabeled: theta_a = 1, theta_b = pi_p.
  static MixtureSpec pu(double pi_p) { return {1.0, pi_p}; }
  /// PU from unlabeled class counts; a is taken as the negative share
  /// directly rather than 1 - pi_p, which can differ in the last bit.
  static MixtureSpec pu_counts(Index u_pos, Index u_neg);
  /// Multi-instance unions: theta_a = 1 - eta_p, theta_b = 0.
  static MixtureSpec mil(double eta_p) { return {1.0 - eta_p, 0.0}; }

  double theta_a() const { return theta_a_; }
  double theta_b() const { return theta_b_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  MixtureSpec(double theta_a, double theta_b, double a);

  double theta_a_;
  double theta_b_;
  double a_;
  double b_;
};

}  // namespace wsauc
