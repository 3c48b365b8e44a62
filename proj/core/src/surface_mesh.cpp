#include "cheeger/surface_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cheeger {

namespace {

std::uint64_t edge_key(Index u, Index v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

}  // namespace

double triangle_area(double a, double b, double c) {
  // Kahan: sort a >= b >= c, then
  // A = 1/4 sqrt((a+(b+c))(c-(a-b))(c+(a-b))(a+(b-c))).
  if (a < b) std::swap(a, b);
  if (a < c) std::swap(a, c);
  if (b < c) std::swap(b, c);
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return p > 0.0 ? 0.25 * std::sqrt(p) : 0.0;
}

SurfaceMesh SurfaceMesh::from_positions(std::vector<Vec3> positions, std::vector<Face> faces) {
  SurfaceMesh mesh;
  mesh.vertex_count_ = positions.size();
  mesh.faces_ = std::move(faces);
  mesh.build_topology();
  mesh.edge_lengths_.resize(mesh.edges_.size());
  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
    const auto& ed = mesh.edges_[e];
    mesh.edge_lengths_[e] = (positions[ed.v1] - positions[ed.v0]).norm();
  }
  mesh.positions_ = std::move(positions);
  mesh.compute_geometry();
  return mesh;
}

SurfaceMesh SurfaceMesh::from_lengths(std::size_t vertex_count, std::vector<Face> faces,
                                      const std::vector<std::array<double, 3>>& face_lengths) {
  if (face_lengths.size() != faces.size())
    throw std::invalid_argument("surface mesh: one length triple per face is required");
  SurfaceMesh mesh;
  mesh.vertex_count_ = vertex_count;
  mesh.faces_ = std::move(faces);
  mesh.build_topology();
  mesh.edge_lengths_.assign(mesh.edges_.size(), -1.0);
  for (std::size_t f = 0; f < mesh.faces_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const Index e = mesh.face_edges_[f][k];
      const double len = face_lengths[f][k];
      double& slot = mesh.edge_lengths_[e];
      if (slot < 0.0) {
        slot = len;
      } else if (std::abs(slot - len) > 1e-12 * std::max(slot, len)) {
        throw std::invalid_argument("surface mesh: inconsistent length for edge " + std::to_string(e));
      }
    }
  }
  mesh.compute_geometry();
  return mesh;
}

void SurfaceMesh::build_topology() {
  if (vertex_count_ > static_cast<std::size_t>(std::numeric_limits<Index>::max()) / 2)
    throw std::length_error("surface mesh: too many vertices");
  if (faces_.empty()) throw std::invalid_argument("surface mesh: no faces");

  std::unordered_map<std::uint64_t, Index> lookup;
  lookup.reserve(faces_.size() * 2);
  face_edges_.resize(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& face = faces_[f];
    for (int k = 0; k < 3; ++k) {
      const Index u = face[k];
      const Index v = face[(k + 1) % 3];
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= vertex_count_ ||
          static_cast<std::size_t>(v) >= vertex_count_)
        throw std::invalid_argument("surface mesh: face " + std::to_string(f) + " references a missing vertex");
      if (u == v) throw std::invalid_argument("surface mesh: face " + std::to_string(f) + " is degenerate");
      auto [it, inserted] = lookup.try_emplace(edge_key(u, v), static_cast<Index>(edges_.size()));
      if (inserted) {
        edges_.push_back({std::min(u, v), std::max(u, v)});
        edge_faces_.push_back({static_cast<Index>(f), kNoIndex});
      } else {
        auto& inc = edge_faces_[it->second];
        if (inc[1] != kNoIndex)
          throw std::invalid_argument("surface mesh: non-manifold edge (" + std::to_string(u) + ", " +
                                      std::to_string(v) + ")");
        if (inc[0] == static_cast<Index>(f))
          throw std::invalid_argument("surface mesh: face " + std::to_string(f) + " repeats an edge");
        inc[1] = static_cast<Index>(f);
      }
      face_edges_[f][k] = it->second;
    }
  }
  boundary_edge_count_ = static_cast<std::size_t>(
      std::count_if(edge_faces_.begin(), edge_faces_.end(), [](const auto& inc) { return inc[1] == kNoIndex; }));

  // vertex -> faces
  vf_offsets_.assign(vertex_count_ + 1, 0);
  for (const Face& face : faces_)
    for (Index v : face) ++vf_offsets_[v + 1];
  for (std::size_t v = 0; v < vertex_count_; ++v) vf_offsets_[v + 1] += vf_offsets_[v];
  vf_faces_.resize(vf_offsets_.back());
  std::vector<Index> cursor(vf_offsets_.begin(), vf_offsets_.end() - 1);
  for (std::size_t f = 0; f < faces_.size(); ++f)
    for (Index v : faces_[f]) vf_faces_[cursor[v]++] = static_cast<Index>(f);
  for (std::size_t v = 0; v < vertex_count_; ++v)
    if (vf_offsets_[v] == vf_offsets_[v + 1])
      throw std::invalid_argument("surface mesh: vertex " + std::to_string(v) + " has no faces");
}

void SurfaceMesh::compute_geometry() {
  face_areas_.resize(faces_.size());
  vertex_areas_.assign(vertex_count_, 0.0);
  total_area_ = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& fe = face_edges_[f];
    const double a = edge_lengths_[fe[0]];
    const double b = edge_lengths_[fe[1]];
    const double c = edge_lengths_[fe[2]];
    if (!(a > 0.0 && b > 0.0 && c > 0.0) || !(a < b + c && b < a + c && c < a + b))
      throw std::invalid_argument("surface mesh: face " + std::to_string(f) + " violates the triangle inequality");
    const double area = triangle_area(a, b, c);
    if (!(area > 0.0)) throw std::invalid_argument("surface mesh: face " + std::to_string(f) + " has zero area");
    face_areas_[f] = area;
    total_area_ += area;
    for (Index v : faces_[f]) vertex_areas_[v] += area / 3.0;
  }

  adjacency_.offsets.assign(vertex_count_ + 1, 0);
  for (const Edge& e : edges_) {
    ++adjacency_.offsets[e.v0 + 1];
    ++adjacency_.offsets[e.v1 + 1];
  }
  for (std::size_t v = 0; v < vertex_count_; ++v) adjacency_.offsets[v + 1] += adjacency_.offsets[v];
  const auto arcs = static_cast<std::size_t>(adjacency_.offsets.back());
  adjacency_.targets.resize(arcs);
  adjacency_.lengths.resize(arcs);
  adjacency_.edge_ids.resize(arcs);
  std::vector<Index> cursor(adjacency_.offsets.begin(), adjacency_.offsets.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    for (auto [from, to] : {std::pair{ed.v0, ed.v1}, std::pair{ed.v1, ed.v0}}) {
      const Index slot = cursor[from]++;
      adjacency_.targets[slot] = to;
      adjacency_.lengths[slot] = edge_lengths_[e];
      adjacency_.edge_ids[slot] = static_cast<Index>(e);
    }
  }
}

double SurfaceMesh::corner_angle(Index f, int k) const {
  // Corner k sits between edges (k+2)%3 and k; the opposite edge is (k+1)%3.
  const auto& fe = face_edges_[f];
  const double a = edge_lengths_[fe[(k + 2) % 3]];
  const double b = edge_lengths_[fe[k]];
  const double c = edge_lengths_[fe[(k + 1) % 3]];
  return std::atan2(4.0 * face_areas_[f], a * a + b * b - c * c);
}

double SurfaceMesh::opposite_cotan(Index f, int k) const {
  const auto& fe = face_edges_[f];
  const double c = edge_lengths_[fe[k]];
  const double a = edge_lengths_[fe[(k + 1) % 3]];
  const double b = edge_lengths_[fe[(k + 2) % 3]];
  return (a * a + b * b - c * c) / (4.0 * face_areas_[f]);
}

std::span<const Index> SurfaceMesh::vertex_faces(Index v) const {
  return {vf_faces_.data() + vf_offsets_[v], vf_faces_.data() + vf_offsets_[v + 1]};
}

Index SurfaceMesh::find_edge(Index u, Index v) const {
  for (Index a = adjacency_.offsets[u]; a < adjacency_.offsets[u + 1]; ++a)
    if (adjacency_.targets[a] == v) return adjacency_.edge_ids[a];
  return kNoIndex;
}

const std::vector<Vec3>& SurfaceMesh::positions() const {
  if (!positions_) throw std::logic_error("surface mesh: no embedding available");
  return *positions_;
}

}  // namespace cheeger
