#include "wsauc/types.hpp"

#include <cmath>
#include <string>

#include "wsauc/errors.hpp"

namespace wsauc {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kP: return "P";
    case Role::kN: return "N";
    case Role::kU: return "U";
    case Role::kNoisyP: return "NoisyP";
    case Role::kNoisyN: return "NoisyN";
    case Role::kBagPositive: return "BagPositive";
    case Role::kBagNegative: return "BagNegative";
  }
  return "?";
}

Role parse_role(std::string_view name) {
  for (Role r : {Role::kP, Role::kN, Role::kU, Role::kNoisyP, Role::kNoisyN, Role::kBagPositive,
                 Role::kBagNegative}) {
    if (to_string(r) == name) return r;
  }
  throw InputError("unknown role '" + std::string(name) + "'");
}

void InstanceSet::validate(bool allow_empty) const {
  const std::string name(to_string(role));
  if (!allow_empty && empty()) throw InputError("instance set " + name + " is empty");
  if (!features.allFinite()) throw InputError("instance set " + name + " has non-finite features");
  const auto n = static_cast<std::size_t>(size());
  if (is_bag_role(role) != !bag_ids.empty() && n > 0)
    throw InputError("instance set " + name + ": bag ids present iff role is a bag role");
  if (!bag_ids.empty() && bag_ids.size() != n)
    throw InputError("instance set " + name + ": bag ids do not cover every instance");
  if (!truth.empty() && truth.size() != n)
    throw InputError("instance set " + name + ": truth labels do not cover every instance");
  if (!ids.empty() && ids.size() != n)
    throw InputError("instance set " + name + ": ids do not cover every instance");
}

InstanceSet InstanceSet::subset(std::span<const Index> rows) const {
  InstanceSet out;
  out.role = role;
  out.features.resize(static_cast<Index>(rows.size()), dim());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index i = rows[k];
    if (i < 0 || i >= size()) throw InputError("InstanceSet::subset: row index out of range");
    out.features.row(static_cast<Index>(k)) = features.row(i);
    if (!bag_ids.empty()) out.bag_ids.push_back(bag_ids[static_cast<std::size_t>(i)]);
    if (!truth.empty()) out.truth.push_back(truth[static_cast<std::size_t>(i)]);
    if (!ids.empty()) out.ids.push_back(ids[static_cast<std::size_t>(i)]);
  }
  return out;
}

Index InstanceSet::count_true_positives() const {
  if (truth.size() != static_cast<std::size_t>(size()))
    throw InputError("count_true_positives: truth labels unavailable");
  Index c = 0;
  for (int t : truth) c += (t > 0);
  return c;
}

InstanceSet concat(const InstanceSet& first, const InstanceSet& second, Role role) {
  if (!first.empty() && !second.empty() && first.dim() != second.dim())
    throw InputError("concat: dimension mismatch");
  const Index d = first.empty() ? second.dim() : first.dim();
  InstanceSet out;
  out.role = role;
  out.features.resize(first.size() + second.size(), d);
  if (!first.empty()) out.features.topRows(first.size()) = first.features;
  if (!second.empty()) out.features.bottomRows(second.size()) = second.features;
  auto join = [](auto& dst, const auto& a, const auto& b, std::size_t na, std::size_t nb) {
    if (a.size() == na && b.size() == nb && (na + nb) > 0 && (!a.empty() || !b.empty())) {
      dst.insert(dst.end(), a.begin(), a.end());
      dst.insert(dst.end(), b.begin(), b.end());
    }
  };
  const auto na = static_cast<std::size_t>(first.size());
  const auto nb = static_cast<std::size_t>(second.size());
  join(out.truth, first.truth, second.truth, na, nb);
  join(out.ids, first.ids, second.ids, na, nb);
  if (is_bag_role(role)) join(out.bag_ids, first.bag_ids, second.bag_ids, na, nb);
  return out;
}

MixtureSpec::MixtureSpec(double theta_a, double theta_b)
    : theta_a_(theta_a), theta_b_(theta_b), a_(theta_a - theta_b), b_((1.0 - (theta_a - theta_b)) / 2.0) {
  if (!(theta_a >= 0.0 && theta_a <= 1.0 && theta_b >= 0.0 && theta_b <= 1.0))
    throw InputError("MixtureSpec: proportions must lie in [0, 1]");
  if (!(theta_a > theta_b)) throw InputError("MixtureSpec: requires theta_a > theta_b");
}

MixtureSpec::MixtureSpec(double theta_a, double theta_b, double a) : MixtureSpec(theta_a, theta_b) {
  a_ = a;
  b_ = (1.0 - a) / 2.0;
}

MixtureSpec MixtureSpec::pu_counts(Index u_pos, Index u_neg) {
  if (u_pos < 0 || u_neg < 1) throw InputError("MixtureSpec::pu_counts: need at least one unlabeled negative");
  const auto n = static_cast<double>(u_pos + u_neg);
  return {1.0, static_cast<double>(u_pos) / n, static_cast<double>(u_neg) / n};
}

}  // namespace wsauc
