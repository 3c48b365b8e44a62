#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cheeger/surface_mesh.hpp"

namespace cheeger {

struct GraphEdge {
  Index u;
  Index v;
  double conductance = 1.0;
  double length = 1.0;
};

/// Abstract discrete manifold: vertex volumes, symmetric conductances and
/// edge lengths. Vol_n of a vertex set is the sum of its weights and the
/// boundary measure of a cut is the sum of crossing conductances.
class WeightedGraph {
 public:
  /// Validates positivity, rejects self loops and duplicate edges, and
  /// requires the graph to be connected.
  WeightedGraph(std::vector<double> vertex_weights, std::vector<GraphEdge> edges);

  /// Unit weights, unit conductances and unit lengths.
  static WeightedGraph unit(std::size_t vertex_count, const std::vector<std::pair<Index, Index>>& edges);

  [[nodiscard]] std::size_t vertex_count() const { return weights_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] std::span<const double> vertex_weights() const { return weights_; }
  [[nodiscard]] double vertex_weight(Index v) const { return weights_[v]; }
  [[nodiscard]] std::span<const GraphEdge> edges() const { return edges_; }
  [[nodiscard]] const GraphEdge& edge(Index e) const { return edges_[e]; }
  [[nodiscard]] const Adjacency& adjacency() const { return adjacency_; }
  [[nodiscard]] double total_weight() const { return total_weight_; }

 private:
  std::vector<double> weights_;
  std::vector<GraphEdge> edges_;
  Adjacency adjacency_;
  double total_weight_ = 0.0;
};

/// True when every vertex is reachable from vertex 0.
[[nodiscard]] bool is_connected(const Adjacency& adjacency);

}  // namespace cheeger
