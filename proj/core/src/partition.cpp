#include "cheeger/partition.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cheeger {

Partition Partition::swapped() const {
  Partition out{unit, labels};
  for (Side& s : out.labels) s = opposite(s);
  return out;
}

std::size_t Partition::count(Side side) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), side));
}

double PartitionMeasures::ratio() const {
  const double smaller = std::min(vol_a, vol_b);
  if (!(smaller > 0.0)) return std::numeric_limits<double>::infinity();
  return interface / smaller;
}

void check_partition(const SurfaceMesh& mesh, const Partition& partition) {
  if (partition.unit != PartitionUnit::face)
    throw std::invalid_argument("partition: meshes are split by face");
  if (partition.labels.size() != mesh.face_count())
    throw std::invalid_argument("partition: label count does not match face count");
}

void check_partition(const WeightedGraph& graph, const Partition& partition) {
  if (partition.unit != PartitionUnit::vertex)
    throw std::invalid_argument("partition: graphs are split by vertex");
  if (partition.labels.size() != graph.vertex_count())
    throw std::invalid_argument("partition: label count does not match vertex count");
}

PartitionMeasures measure(const SurfaceMesh& mesh, const Partition& partition) {
  check_partition(mesh, partition);
  PartitionMeasures out;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    (partition.labels[f] == Side::A ? out.vol_a : out.vol_b) += mesh.face_area(static_cast<Index>(f));
  }
  if (partition.count(Side::A) == 0 || partition.count(Side::B) == 0)
    throw std::invalid_argument("partition: both sides must be nonempty");
  out.total = out.vol_a + out.vol_b;
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
    const auto& inc = mesh.edge_faces(static_cast<Index>(e));
    if (inc[1] == kNoIndex) continue;
    if (partition.labels[inc[0]] != partition.labels[inc[1]]) {
      out.interface_edges.push_back(static_cast<Index>(e));
      out.interface += mesh.edge_length(static_cast<Index>(e));
    }
  }
  return out;
}

PartitionMeasures measure(const WeightedGraph& graph, const Partition& partition) {
  check_partition(graph, partition);
  if (partition.count(Side::A) == 0 || partition.count(Side::B) == 0)
    throw std::invalid_argument("partition: both sides must be nonempty");
  PartitionMeasures out;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v)
    (partition.labels[v] == Side::A ? out.vol_a : out.vol_b) += graph.vertex_weight(static_cast<Index>(v));
  out.total = out.vol_a + out.vol_b;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const GraphEdge& ed = graph.edge(static_cast<Index>(e));
    if (partition.labels[ed.u] != partition.labels[ed.v]) {
      out.interface_edges.push_back(static_cast<Index>(e));
      out.interface += ed.conductance;
    }
  }
  return out;
}

Partition faces_from_vertex_labels(const SurfaceMesh& mesh, std::span<const Side> vertex_labels) {
  if (vertex_labels.size() != mesh.vertex_count())
    throw std::invalid_argument("partition: vertex label count does not match vertex count");
  Partition out{PartitionUnit::face, std::vector<Side>(mesh.face_count(), Side::A)};
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    int b_votes = 0;
    for (Index v : mesh.face(static_cast<Index>(f))) b_votes += vertex_labels[v] == Side::B ? 1 : 0;
    out.labels[f] = b_votes >= 2 ? Side::B : Side::A;
  }
  return out;
}

std::vector<VertexSide> vertex_sides(const SurfaceMesh& mesh, const Partition& partition) {
  check_partition(mesh, partition);
  std::vector<VertexSide> out(mesh.vertex_count(), VertexSide::A);
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    const auto star = mesh.vertex_faces(static_cast<Index>(v));
    out[v] = partition.labels[star.front()] == Side::A ? VertexSide::A : VertexSide::B;
  }
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
    const auto& inc = mesh.edge_faces(static_cast<Index>(e));
    if (inc[1] == kNoIndex || partition.labels[inc[0]] == partition.labels[inc[1]]) continue;
    const Edge& ed = mesh.edge(static_cast<Index>(e));
    out[ed.v0] = VertexSide::interface;
    out[ed.v1] = VertexSide::interface;
  }
  return out;
}

}  // namespace cheeger
