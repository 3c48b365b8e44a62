#pragma once

#include <optional>
#include <vector>

#include "cheeger/distance.hpp"
#include "cheeger/partition.hpp"
#include "cheeger/surface_mesh.hpp"
#include "cheeger/weighted_graph.hpp"

namespace cheeger {

/// Measures of a metric ball B_x(r). On meshes a face belongs to the ball
/// iff all three corners are within r; on graphs the ball is a vertex set.
struct BallMeasures {
  double volume = 0.0;     ///< Vol(B_x(r))
  double volume_a = 0.0;   ///< Vol(A ∩ B_x(r)), zero without a partition
  double volume_b = 0.0;   ///< Vol(B ∩ B_x(r))
  double interface = 0.0;  ///< Vol(Sigma ∩ B_x(r)): interface edges with both ends inside
};

struct Ball {
  Index center = kNoIndex;
  double radius = 0.0;
  std::vector<Index> vertices;  ///< within distance r, in settle order
  std::vector<Index> faces;     ///< meshes only, ascending
  BallMeasures measures;
};

/// Repeated ball queries against one domain and optional partition. Not
/// thread safe; use one probe per thread.
class BallProbe {
 public:
  BallProbe(const SurfaceMesh& mesh, const Partition* partition = nullptr);
  BallProbe(const WeightedGraph& graph, const Partition* partition = nullptr);

  [[nodiscard]] BallMeasures measure(Index center, double radius);

  /// Measures of B_x(inner) and B_x(outer) from one Dijkstra run
  /// (inner <= outer).
  [[nodiscard]] std::pair<BallMeasures, BallMeasures> measure_pair(Index center, double inner, double outer);

  [[nodiscard]] Ball ball(Index center, double radius);

 private:
  BallMeasures accumulate(std::span<const std::pair<Index, double>> settled, double radius, std::vector<Index>* faces);

  const SurfaceMesh* mesh_ = nullptr;
  const WeightedGraph* graph_ = nullptr;
  const Partition* partition_ = nullptr;
  BoundedDijkstra dijkstra_;
  std::vector<double> dist_;
  std::vector<char> interface_edge_;
};

[[nodiscard]] Ball ball(const SurfaceMesh& mesh, Index center, double radius, const Partition* partition = nullptr);
[[nodiscard]] Ball ball(const WeightedGraph& graph, Index center, double radius,
                        const Partition* partition = nullptr);

}  // namespace cheeger
