#include "cheeger/ball.hpp"

#include <algorithm>
#include <stdexcept>

namespace cheeger {

BallProbe::BallProbe(const SurfaceMesh& mesh, const Partition* partition)
    : mesh_(&mesh), partition_(partition), dijkstra_(mesh.adjacency()), dist_(mesh.vertex_count(), kUnreached) {
  if (partition_) {
    check_partition(mesh, *partition_);
    interface_edge_.assign(mesh.edge_count(), 0);
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
      const auto& inc = mesh.edge_faces(static_cast<Index>(e));
      if (inc[1] != kNoIndex && partition_->labels[inc[0]] != partition_->labels[inc[1]]) interface_edge_[e] = 1;
    }
  }
}

BallProbe::BallProbe(const WeightedGraph& graph, const Partition* partition)
    : graph_(&graph), partition_(partition), dijkstra_(graph.adjacency()), dist_(graph.vertex_count(), kUnreached) {
  if (partition_) {
    check_partition(graph, *partition_);
    interface_edge_.assign(graph.edge_count(), 0);
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
      const GraphEdge& ed = graph.edge(static_cast<Index>(e));
      if (partition_->labels[ed.u] != partition_->labels[ed.v]) interface_edge_[e] = 1;
    }
  }
}

BallMeasures BallProbe::accumulate(std::span<const std::pair<Index, double>> settled, double radius,
                                   std::vector<Index>* faces) {
  BallMeasures m;
  for (const auto& [v, d] : settled)
    if (d <= radius) dist_[v] = d;
  auto inside = [&](Index v) { return dist_[v] <= radius; };

  const Adjacency& adj = mesh_ ? mesh_->adjacency() : graph_->adjacency();
  for (const auto& [v, d] : settled) {
    if (d > radius) continue;
    if (mesh_) {
      for (Index f : mesh_->vertex_faces(v)) {
        const Face& face = mesh_->face(f);
        // count each face once, from its smallest corner
        if (v != std::min({face[0], face[1], face[2]})) continue;
        if (!inside(face[0]) || !inside(face[1]) || !inside(face[2])) continue;
        const double area = mesh_->face_area(f);
        m.volume += area;
        if (partition_) (partition_->labels[f] == Side::A ? m.volume_a : m.volume_b) += area;
        if (faces) faces->push_back(f);
      }
    } else {
      const double w = graph_->vertex_weight(v);
      m.volume += w;
      if (partition_) (partition_->labels[v] == Side::A ? m.volume_a : m.volume_b) += w;
    }
    if (partition_) {
      for (Index a = adj.offsets[v]; a < adj.offsets[v + 1]; ++a) {
        const Index w = adj.targets[a];
        const Index e = adj.edge_ids[a];
        if (v < w && interface_edge_[e] && inside(w))
          m.interface += mesh_ ? mesh_->edge_length(e) : graph_->edge(e).conductance;
      }
    }
  }
  for (const auto& [v, d] : settled) dist_[v] = kUnreached;
  return m;
}

BallMeasures BallProbe::measure(Index center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("ball: radius must be >= 0");
  return accumulate(dijkstra_.run(center, radius), radius, nullptr);
}

std::pair<BallMeasures, BallMeasures> BallProbe::measure_pair(Index center, double inner, double outer) {
  if (!(inner >= 0.0) || !(outer >= inner)) throw std::invalid_argument("ball: need 0 <= inner <= outer");
  const auto settled = dijkstra_.run(center, outer);
  BallMeasures small = accumulate(settled, inner, nullptr);
  BallMeasures large = accumulate(settled, outer, nullptr);
  return {small, large};
}

Ball BallProbe::ball(Index center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("ball: radius must be >= 0");
  Ball out;
  out.center = center;
  out.radius = radius;
  const auto settled = dijkstra_.run(center, radius);
  out.vertices.reserve(settled.size());
  for (const auto& [v, d] : settled) out.vertices.push_back(v);
  out.measures = accumulate(settled, radius, mesh_ ? &out.faces : nullptr);
  std::sort(out.faces.begin(), out.faces.end());
  return out;
}

Ball ball(const SurfaceMesh& mesh, Index center, double radius, const Partition* partition) {
  BallProbe probe(mesh, partition);
  return probe.ball(center, radius);
}

Ball ball(const WeightedGraph& graph, Index center, double radius, const Partition* partition) {
  BallProbe probe(graph, partition);
  return probe.ball(center, radius);
}

}  // namespace cheeger
