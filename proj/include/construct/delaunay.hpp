#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace construct {

struct GridPoint {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Delaunay edges (i < j, sorted) of distinct integer points, read off as the dual of
/// the Voronoi diagram. Four co-circular points may leave one diagonal out; the result
/// is still a plane graph.
std::vector<std::pair<int, int>> delaunay_edges(std::span<const GridPoint> points);

/// True if some three points are exactly collinear.
bool has_collinear_triple(std::span<const GridPoint> points);

}  // namespace construct
