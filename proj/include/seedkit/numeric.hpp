#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seedkit {

/// Pairwise (cascade) summation; error grows as O(log n) instead of O(n).
double pairwise_sum(std::span<const double> values);

inline double pairwise_sum(const std::vector<double>& values) {
  return pairwise_sum(std::span<const double>(values));
}

}  // namespace seedkit
