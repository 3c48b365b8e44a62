#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cheeger {

using Index = std::int32_t;
inline constexpr Index kNoIndex = -1;

using Vec3 = Eigen::Vector3d;
using Face = std::array<Index, 3>;

struct Edge {
  Index v0;  ///< smaller vertex id
  Index v1;  ///< larger vertex id
};

/// Compressed adjacency with per-arc lengths, shared by distance queries on
/// meshes and graphs.
struct Adjacency {
  std::vector<Index> offsets;   ///< size vertex_count + 1
  std::vector<Index> targets;   ///< neighbor vertex per arc
  std::vector<double> lengths;  ///< arc length
  std::vector<Index> edge_ids;  ///< undirected edge id per arc

  [[nodiscard]] std::size_t vertex_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// Triangle mesh whose metric is given by intrinsic edge lengths. Vertex
/// positions are optional; when present the lengths are computed from them.
class SurfaceMesh {
 public:
  /// Mesh from an embedding; edge lengths are Euclidean chord lengths.
  static SurfaceMesh from_positions(std::vector<Vec3> positions, std::vector<Face> faces);

  /// Mesh from intrinsic data. face_lengths[f][k] is the length of the edge
  /// (faces[f][k], faces[f][(k+1)%3]); shared edges must agree.
  static SurfaceMesh from_lengths(std::size_t vertex_count, std::vector<Face> faces,
                                  const std::vector<std::array<double, 3>>& face_lengths);

  [[nodiscard]] std::size_t vertex_count() const { return vertex_count_; }
  [[nodiscard]] std::size_t face_count() const { return faces_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }

  [[nodiscard]] std::span<const Face> faces() const { return faces_; }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] const Face& face(Index f) const { return faces_[f]; }
  [[nodiscard]] const Edge& edge(Index e) const { return edges_[e]; }

  /// Edge ids of face f; entry k is the edge opposite faces[f][(k+2)%3].
  [[nodiscard]] const std::array<Index, 3>& face_edges(Index f) const { return face_edges_[f]; }
  /// Incident faces of an edge; the second entry is kNoIndex on the boundary.
  [[nodiscard]] const std::array<Index, 2>& edge_faces(Index e) const { return edge_faces_[e]; }
  [[nodiscard]] bool is_boundary_edge(Index e) const { return edge_faces_[e][1] == kNoIndex; }
  [[nodiscard]] bool is_closed() const { return boundary_edge_count_ == 0; }
  [[nodiscard]] std::size_t boundary_edge_count() const { return boundary_edge_count_; }

  [[nodiscard]] double edge_length(Index e) const { return edge_lengths_[e]; }
  [[nodiscard]] std::span<const double> edge_lengths() const { return edge_lengths_; }
  [[nodiscard]] double face_area(Index f) const { return face_areas_[f]; }
  [[nodiscard]] std::span<const double> face_areas() const { return face_areas_; }
  /// Barycentric lumped area: one third of each incident face.
  [[nodiscard]] double vertex_area(Index v) const { return vertex_areas_[v]; }
  [[nodiscard]] std::span<const double> vertex_areas() const { return vertex_areas_; }
  [[nodiscard]] double total_area() const { return total_area_; }

  /// Interior angle of face f at its k-th corner.
  [[nodiscard]] double corner_angle(Index f, int k) const;
  /// Cotangent of the angle of face f opposite its edge face_edges(f)[k].
  [[nodiscard]] double opposite_cotan(Index f, int k) const;

  /// Faces incident to each vertex (CSR).
  [[nodiscard]] std::span<const Index> vertex_faces(Index v) const;

  [[nodiscard]] const Adjacency& adjacency() const { return adjacency_; }
  /// Edge id joining u and v, or kNoIndex.
  [[nodiscard]] Index find_edge(Index u, Index v) const;

  [[nodiscard]] bool has_positions() const { return positions_.has_value(); }
  [[nodiscard]] const std::vector<Vec3>& positions() const;

  /// Free-form numeric annotations written by generators (grid sizes, neck
  /// radius, ...). "family" is encoded in the string map.
  std::map<std::string, double> metadata;
  std::map<std::string, std::string> tags;

 private:
  SurfaceMesh() = default;
  void build_topology();
  void compute_geometry();

  std::size_t vertex_count_ = 0;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<Index, 3>> face_edges_;
  std::vector<std::array<Index, 2>> edge_faces_;
  std::size_t boundary_edge_count_ = 0;
  std::vector<double> edge_lengths_;
  std::vector<double> face_areas_;
  std::vector<double> vertex_areas_;
  double total_area_ = 0.0;
  std::vector<Index> vf_offsets_;
  std::vector<Index> vf_faces_;
  Adjacency adjacency_;
  std::optional<std::vector<Vec3>> positions_;
};

/// Area of a triangle with side lengths a, b, c (Kahan's stable Heron form).
/// Returns 0 for degenerate or invalid triples.
[[nodiscard]] double triangle_area(double a, double b, double c);

}  // namespace cheeger
