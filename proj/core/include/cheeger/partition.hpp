#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cheeger/surface_mesh.hpp"
#include "cheeger/weighted_graph.hpp"

namespace cheeger {

enum class Side : std::uint8_t { A = 0, B = 1 };

[[nodiscard]] inline Side opposite(Side s) { return s == Side::A ? Side::B : Side::A; }

/// Graphs are split by vertex, meshes by face.
enum class PartitionUnit : std::uint8_t { vertex, face };

/// Two-sided labeling of the units of a domain.
struct Partition {
  PartitionUnit unit = PartitionUnit::face;
  std::vector<Side> labels;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  [[nodiscard]] Partition swapped() const;
  [[nodiscard]] std::size_t count(Side side) const;
};

/// Vol(A), Vol(B) and Vol(Sigma) of a partition. total is vol_a + vol_b.
struct PartitionMeasures {
  double vol_a = 0.0;
  double vol_b = 0.0;
  double total = 0.0;
  double interface = 0.0;
  std::vector<Index> interface_edges;

  /// Vol(Sigma) / min(Vol(A), Vol(B)).
  [[nodiscard]] double ratio() const;
};

/// Face partition measures: areas by face sums, Sigma = interior edges whose
/// two faces carry different labels. Throws if a side is empty or the
/// partition is not face based.
[[nodiscard]] PartitionMeasures measure(const SurfaceMesh& mesh, const Partition& partition);

/// Vertex partition measures: weight sums and crossing conductances.
[[nodiscard]] PartitionMeasures measure(const WeightedGraph& graph, const Partition& partition);

/// Face labels from a vertex labeling by majority of the three corners
/// (ties go to side A).
[[nodiscard]] Partition faces_from_vertex_labels(const SurfaceMesh& mesh, std::span<const Side> vertex_labels);

/// Per-vertex position relative to a face partition.
enum class VertexSide : std::uint8_t { A, B, interface };

/// Vertices incident to an interface edge are `interface`; every other
/// vertex sees a single face label in its star.
[[nodiscard]] std::vector<VertexSide> vertex_sides(const SurfaceMesh& mesh, const Partition& partition);

/// Validates sizes and unit type; throws std::invalid_argument.
void check_partition(const SurfaceMesh& mesh, const Partition& partition);
void check_partition(const WeightedGraph& graph, const Partition& partition);

}  // namespace cheeger
