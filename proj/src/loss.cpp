#include "wsauc/loss.hpp"

namespace wsauc {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kZeroOne: return "zero_one";
    case LossKind::kSquared: return "squared";
    case LossKind::kLogistic: return "logistic";
    case LossKind::kHinge: return "hinge";
  }
  return "?";
}

LossKind parse_loss_kind(std::string_view name) {
  for (LossKind k : {LossKind::kZeroOne, LossKind::kSquared, LossKind::kLogistic, LossKind::kHinge}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown loss '" + std::string(name) + "'");
}

}  // namespace wsauc
