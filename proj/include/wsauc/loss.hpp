#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "wsauc/errors.hpp"

namespace wsauc {

enum class LossKind { kZeroOne, kSquared, kLogistic, kHinge };

/// Pairwise ranking loss evaluated on a score difference z = f(x) - f(x').
struct SurrogateLoss {
  LossKind kind = LossKind::kLogistic;
  double tie_value = 0.5;  // zero_one only

  static SurrogateLoss zero_one(double tie = 0.5) { return {LossKind::kZeroOne, tie}; }
  static SurrogateLoss squared() { return {LossKind::kSquared, 0.5}; }
  static SurrogateLoss logistic() { return {LossKind::kLogistic, 0.5}; }
  static SurrogateLoss hinge() { return {LossKind::kHinge, 0.5}; }

  bool differentiable() const { return kind != LossKind::kZeroOne; }

  friend bool operator==(const SurrogateLoss&, const SurrogateLoss&) = default;
};

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

/// l(z). Throws InputError for non-finite z.
template <typename Scalar>
Scalar loss_value(const SurrogateLoss& loss, Scalar z) {
  if (!std::isfinite(z)) throw InputError("loss_value: non-finite margin");
  switch (loss.kind) {
    case LossKind::kZeroOne:
      if (z < Scalar(0)) return Scalar(1);
      if (z > Scalar(0)) return Scalar(0);
      return Scalar(loss.tie_value);
    case LossKind::kSquared: {
      const Scalar r = Scalar(1) - z;
      return r * r;
    }
    case LossKind::kLogistic:
      // ln(1 + e^-z) without overflow for large |z|
      return z >= Scalar(0) ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    case LossKind::kHinge:
      return z < Scalar(1) ? Scalar(1) - z : Scalar(0);
  }
  return Scalar(0);
}

/// dl/dz. Hinge takes subgradient 0 at the kink z = 1.
template <typename Scalar>
Scalar loss_grad(const SurrogateLoss& loss, Scalar z) {
  if (!std::isfinite(z)) throw InputError("loss_grad: non-finite margin");
  switch (loss.kind) {
    case LossKind::kZeroOne:
      throw UnsupportedOperation("loss_grad: zero_one loss has no gradient");
    case LossKind::kSquared:
      return Scalar(-2) * (Scalar(1) - z);
    case LossKind::kLogistic:
      // -sigma(-z)
      return z >= Scalar(0) ? -std::exp(-z) / (Scalar(1) + std::exp(-z))
                            : Scalar(-1) / (Scalar(1) + std::exp(z));
    case LossKind::kHinge:
      return z < Scalar(1) ? Scalar(-1) : Scalar(0);
  }
  return Scalar(0);
}

/// True when l is nonincreasing on [z_lo, z_hi]. Squared loss turns upward
/// past z = 1; every other kind is nonincreasing everywhere.
inline bool nonincreasing_on(const SurrogateLoss& loss, double z_lo, double z_hi) {
  (void)z_lo;
  if (loss.kind == LossKind::kSquared) return z_hi <= 1.0;
  return true;
}

}  // namespace wsauc
