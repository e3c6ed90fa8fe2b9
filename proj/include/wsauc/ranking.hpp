#pragma once

#include <vector>

#include "wsauc/types.hpp"

namespace wsauc {

/// floor(fraction * n), tolerant of representation error in fraction.
Index floor_count(double fraction, Index n);
/// ceil(fraction * n), tolerant of representation error in fraction.
Index ceil_count(double fraction, Index n);

/// Indices of the k highest scores, returned in ascending index order.
/// Equal scores at the cut prefer the lower index.
std::vector<Index> top_k_indices(const Eigen::Ref<const Vector>& scores, Index k);
/// Indices of the k lowest scores, returned in ascending index order.
std::vector<Index> bottom_k_indices(const Eigen::Ref<const Vector>& scores, Index k);

Vector gather(const Eigen::Ref<const Vector>& v, const std::vector<Index>& idx);

}  // namespace wsauc
