#include "cheeger/tube.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "cheeger/distance.hpp"

namespace cheeger {

SignedDistanceField signed_distance(const SurfaceMesh& mesh, const Partition& partition) {
  const auto sides = vertex_sides(mesh, partition);
  SignedDistanceField out;
  for (std::size_t v = 0; v < sides.size(); ++v)
    if (sides[v] == VertexSide::interface) out.seeds.push_back(static_cast<Index>(v));
  if (out.seeds.empty()) throw std::invalid_argument("signed distance: partition has no interface");
  DistanceField d = geodesic_distance(mesh, out.seeds);
  if (d.unreached) throw std::invalid_argument("signed distance: mesh is disconnected from the interface");
  out.rho = std::move(d.values);
  for (std::size_t v = 0; v < sides.size(); ++v)
    if (sides[v] == VertexSide::B) out.rho[v] = -out.rho[v];
  out.partition = partition;
  return out;
}

TubeSet tube_set(const SurfaceMesh& mesh, const SignedDistanceField& field, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("tube: t must be >= 0");
  if (field.rho.size() != mesh.vertex_count()) throw std::invalid_argument("tube: field size mismatch");
  TubeSet out;
  auto inside = [&](Index v) { return std::abs(field.rho[v]) <= t; };
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
    if (inside(static_cast<Index>(v))) out.vertices.push_back(static_cast<Index>(v));
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.face(static_cast<Index>(f));
    if (inside(face[0]) && inside(face[1]) && inside(face[2])) {
      out.faces.push_back(static_cast<Index>(f));
      out.volume += mesh.face_area(static_cast<Index>(f));
    }
  }
  return out;
}

void TubeProfile::write_csv(std::ostream& out) const {
  out << "a,f,V\n";
  char buf[96];
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", edges[i], f[i], cumulative[i]);
    out << buf;
  }
}

TubeProfile level_profile(const SurfaceMesh& mesh, const SignedDistanceField& field, int bins, TubeSide side) {
  if (bins < 4) throw std::invalid_argument("profile: need at least 4 bins");
  if (field.rho.size() != mesh.vertex_count()) throw std::invalid_argument("profile: field size mismatch");
  const PartitionMeasures pm = measure(mesh, field.partition);
  const Side wanted = side == TubeSide::positive ? Side::A : Side::B;

  std::vector<Index> faces;
  std::vector<double> face_rho;
  double amax = 0.0;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    if (field.partition.labels[f] != wanted) continue;
    const Face& face = mesh.face(static_cast<Index>(f));
    const double a = std::max({std::abs(field.rho[face[0]]), std::abs(field.rho[face[1]]), std::abs(field.rho[face[2]])});
    faces.push_back(static_cast<Index>(f));
    face_rho.push_back(a);
    amax = std::max(amax, a);
  }
  if (faces.empty()) throw std::invalid_argument("profile: side is empty");
  if (!(amax > 0.0)) throw std::invalid_argument("profile: side has zero depth");

  TubeProfile p;
  const auto B = static_cast<std::size_t>(bins);
  p.bin_width = amax / bins;
  p.edges.resize(B + 1);
  for (std::size_t i = 0; i <= B; ++i) p.edges[i] = i == B ? amax : p.bin_width * static_cast<double>(i);
  p.bin_volume.assign(B, 0.0);
  for (std::size_t j = 0; j < faces.size(); ++j) {
    auto bin = static_cast<std::size_t>(face_rho[j] / p.bin_width);
    // a face at depth exactly a_i belongs to A_{0,a_i}
    if (bin > 0 && face_rho[j] <= p.edges[bin]) --bin;
    bin = std::min(bin, B - 1);
    p.bin_volume[bin] += mesh.face_area(faces[j]);
    p.side_volume += mesh.face_area(faces[j]);
  }
  p.cumulative.assign(B + 1, 0.0);
  for (std::size_t i = 0; i < B; ++i) p.cumulative[i + 1] = p.cumulative[i] + p.bin_volume[i];

  p.f.assign(B + 1, 0.0);
  p.f[0] = pm.interface;
  for (std::size_t i = 1; i < B; ++i) p.f[i] = (p.cumulative[i + 1] - p.cumulative[i - 1]) / (2.0 * p.bin_width);
  p.f[B] = (p.cumulative[B] - p.cumulative[B - 1]) / p.bin_width;
  return p;
}

TubeCheck tube_growth_check(const TubeProfile& profile, double C, double zero_tolerance) {
  if (!(C >= 0.0)) throw std::invalid_argument("tube check: C must be >= 0");
  if (profile.edges.size() < 2) throw std::invalid_argument("tube check: empty profile");
  TubeCheck out;
  out.C = C;
  out.limit_form = C <= zero_tolerance;
  const double f0 = profile.f0();
  out.slack = 2.0 * profile.bin_width * f0;
  out.worst_margin = INFINITY;
  out.worst_ratio_margin = INFINITY;
  for (std::size_t i = 1; i < profile.edges.size(); ++i) {
    const double t = profile.edges[i];
    const double V = profile.cumulative[i];
    const double bound = out.limit_form ? 1.0 / t : C * std::exp(-C * t);
    const double allowed = f0 / bound;
    const double margin = allowed - V;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_t = t;
    }
    if (V > 0.0) out.worst_ratio_margin = std::min(out.worst_ratio_margin, f0 / V - bound);
  }
  out.passed = out.worst_margin >= -out.slack;
  return out;
}

std::vector<double> boundary_geodesic_curvature(const SurfaceMesh& mesh) {
  const std::size_t nv = mesh.vertex_count();
  std::vector<double> dual(nv, 0.0);
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
    if (!mesh.is_boundary_edge(static_cast<Index>(e))) continue;
    const Edge& ed = mesh.edge(static_cast<Index>(e));
    dual[ed.v0] += 0.5 * mesh.edge_length(static_cast<Index>(e));
    dual[ed.v1] += 0.5 * mesh.edge_length(static_cast<Index>(e));
  }
  std::vector<double> angle(nv, 0.0);
  for (std::size_t f = 0; f < mesh.face_count(); ++f)
    for (int k = 0; k < 3; ++k) angle[mesh.face(static_cast<Index>(f))[k]] += mesh.corner_angle(static_cast<Index>(f), k);
  std::vector<double> kappa(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v)
    if (dual[v] > 0.0) kappa[v] = (std::numbers::pi - angle[v]) / dual[v];
  return kappa;
}

BoundaryRatioReport boundary_ratio_bound(const SurfaceMesh& mesh, double K, int n, double zero_tolerance) {
  if (mesh.is_closed()) throw std::invalid_argument("boundary ratio: mesh has no boundary");
  if (n < 2 || !(K >= 0.0)) throw std::invalid_argument("boundary ratio: need n >= 2 and K >= 0");
  BoundaryRatioReport out;
  const std::size_t nv = mesh.vertex_count();
  std::vector<double> dual(nv, 0.0);
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
    if (!mesh.is_boundary_edge(static_cast<Index>(e))) continue;
    const double len = mesh.edge_length(static_cast<Index>(e));
    out.boundary_length += len;
    const Edge& ed = mesh.edge(static_cast<Index>(e));
    dual[ed.v0] += 0.5 * len;
    dual[ed.v1] += 0.5 * len;
  }
  const std::vector<double> kappa = boundary_geodesic_curvature(mesh);
  const double floor_value = (n - 1) * std::sqrt(K);
  out.min_kappa = INFINITY;
  out.max_kappa = -INFINITY;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!(dual[v] > 0.0)) continue;
    out.C0 += std::max(kappa[v], floor_value) * dual[v];
    out.min_kappa = std::min(out.min_kappa, kappa[v]);
    out.max_kappa = std::max(out.max_kappa, kappa[v]);
  }
  out.area = mesh.total_area();
  out.ratio = out.boundary_length / out.area;
  out.diameter = graph_diameter(mesh.adjacency());
  out.limit_form = out.C0 <= zero_tolerance * out.boundary_length;
  out.bound = out.limit_form ? 1.0 / out.diameter : out.C0 * std::exp(-out.C0 * out.diameter);
  out.passed = out.ratio >= out.bound;
  return out;
}

}  // namespace cheeger
