#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace forksched {

// Indices of the non-dominated (lower-left) points, sorted by the first
// coordinate. Exact duplicates keep one representative.
inline std::vector<std::size_t> pareto_indices(
    const std::vector<std::pair<double, double>>& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].first != points[b].first)
      return points[a].first < points[b].first;
    return points[a].second < points[b].second;
  });
  std::vector<std::size_t> keep;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx : order) {
    if (points[idx].second < best) {
      keep.push_back(idx);
      best = points[idx].second;
    }
  }
  return keep;
}

}  // namespace forksched
