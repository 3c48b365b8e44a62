#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cheeger/surface_mesh.hpp"
#include "cheeger/weighted_graph.hpp"

namespace cheeger {

inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

/// Multi-source shortest-path distances along edges.
struct DistanceField {
  std::vector<double> values;    ///< kUnreached where no source is reachable
  std::size_t unreached = 0;     ///< number of +inf entries
};

/// Dijkstra over the edge graph. Vertices farther than cutoff are left at
/// kUnreached. Throws on an empty or out-of-range source set.
[[nodiscard]] DistanceField geodesic_distance(const Adjacency& adjacency, std::span<const Index> sources,
                                              double cutoff = kUnreached);
[[nodiscard]] DistanceField geodesic_distance(const SurfaceMesh& mesh, std::span<const Index> sources,
                                              double cutoff = kUnreached);
[[nodiscard]] DistanceField geodesic_distance(const WeightedGraph& graph, std::span<const Index> sources,
                                              double cutoff = kUnreached);

/// Largest finite pairwise distance (all-sources Dijkstra).
[[nodiscard]] double graph_diameter(const Adjacency& adjacency);

/// Reusable single-source Dijkstra bounded by a radius. Visited vertices are
/// returned in settle order, so repeated queries cost only the ball size.
class BoundedDijkstra {
 public:
  explicit BoundedDijkstra(const Adjacency& adjacency);

  /// (vertex, distance) for every vertex within radius of source.
  std::span<const std::pair<Index, double>> run(Index source, double radius);

 private:
  const Adjacency* adjacency_;
  std::vector<double> dist_;
  std::vector<std::pair<Index, double>> settled_;
  std::vector<Index> touched_;
};

}  // namespace cheeger
