#include "construct/delaunay.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/polygon/voronoi.hpp>

namespace construct {

std::vector<std::pair<int, int>> delaunay_edges(std::span<const GridPoint> points) {
  std::vector<boost::polygon::point_data<std::int32_t>> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.emplace_back(p.x, p.y);

  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(pts.begin(), pts.end(), &vd);

  std::vector<std::pair<int, int>> edges;
  for (const auto& e : vd.edges()) {
    const auto a = static_cast<int>(e.cell()->source_index());
    const auto b = static_cast<int>(e.twin()->cell()->source_index());
    if (a < b) edges.emplace_back(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

bool has_collinear_triple(std::span<const GridPoint> points) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t ux = points[j].x - static_cast<std::int64_t>(points[i].x);
      const std::int64_t uy = points[j].y - static_cast<std::int64_t>(points[i].y);
      for (std::size_t k = j + 1; k < n; ++k) {
        const std::int64_t vx = points[k].x - static_cast<std::int64_t>(points[i].x);
        const std::int64_t vy = points[k].y - static_cast<std::int64_t>(points[i].y);
        if (ux * vy - uy * vx == 0) return true;
      }
    }
  return false;
}

}  // namespace construct
