#include "cheeger/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <Eigen/Geometry>

namespace cheeger {

namespace {

constexpr double kPi = std::numbers::pi;

void orient_outward(const std::vector<Vec3>& positions, std::vector<Face>& faces) {
  for (Face& f : faces) {
    const Vec3& a = positions[f[0]];
    const Vec3& b = positions[f[1]];
    const Vec3& c = positions[f[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(f[1], f[2]);
  }
}

/// One ring of a surface of revolution. radius == 0 is a pole.
struct Ring {
  double radius;
  double z;
};

/// Meshes the rings in order, zipping consecutive rings by angle. Each ring
/// gets max(min_segments, round(2 pi r / arc_step)) vertices at angles
/// 2 pi j / count.
SurfaceMesh revolve(const std::vector<Ring>& rings, double arc_step, int min_segments) {
  std::vector<Vec3> positions;
  std::vector<Index> first;
  std::vector<int> count;
  for (const Ring& ring : rings) {
    first.push_back(static_cast<Index>(positions.size()));
    if (ring.radius <= 0.0) {
      count.push_back(1);
      positions.emplace_back(0.0, 0.0, ring.z);
      continue;
    }
    const int n = std::max(min_segments, static_cast<int>(std::lround(2.0 * kPi * ring.radius / arc_step)));
    count.push_back(n);
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * kPi * j / n;
      positions.emplace_back(ring.radius * std::cos(phi), ring.radius * std::sin(phi), ring.z);
    }
  }

  std::vector<Face> faces;
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const int n0 = count[k];
    const int n1 = count[k + 1];
    const int steps0 = n0 > 1 ? n0 : 0;
    const int steps1 = n1 > 1 ? n1 : 0;
    auto in = [&](int i) { return first[k] + (i % n0); };
    auto out = [&](int j) { return first[k + 1] + (j % n1); };
    int i = 0;
    int j = 0;
    while (i < steps0 || j < steps1) {
      bool advance_outer;
      if (i >= steps0) {
        advance_outer = true;
      } else if (j >= steps1) {
        advance_outer = false;
      } else {
        // compare (i+1)/n0 with (j+1)/n1 exactly
        advance_outer = static_cast<long>(j + 1) * n0 <= static_cast<long>(i + 1) * n1;
      }
      if (advance_outer) {
        faces.push_back({in(i), out(j), out(j + 1)});
        ++j;
      } else {
        faces.push_back({in(i), out(j), in(i + 1)});
        ++i;
      }
    }
  }
  return SurfaceMesh::from_positions(std::move(positions), std::move(faces));
}

}  // namespace

SurfaceMesh generate_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 8)
    throw std::invalid_argument("icosphere: subdivisions must be in [0, 8]");

  std::vector<Vec3> positions;
  positions.emplace_back(0.0, 0.0, 1.0);
  const double ring_r = 2.0 / std::sqrt(5.0);
  const double ring_z = 1.0 / std::sqrt(5.0);
  for (int k = 0; k < 5; ++k) {
    const double phi = 2.0 * kPi * k / 5.0;
    positions.emplace_back(ring_r * std::cos(phi), ring_r * std::sin(phi), ring_z);
  }
  for (int k = 0; k < 5; ++k) {
    const double phi = 2.0 * kPi * k / 5.0 + kPi / 5.0;
    positions.emplace_back(ring_r * std::cos(phi), ring_r * std::sin(phi), -ring_z);
  }
  positions.emplace_back(0.0, 0.0, -1.0);

  std::vector<Face> faces;
  for (Index k = 0; k < 5; ++k) {
    const Index u0 = 1 + k;
    const Index u1 = 1 + (k + 1) % 5;
    const Index l0 = 6 + k;
    const Index l1 = 6 + (k + 1) % 5;
    faces.push_back({0, u0, u1});
    faces.push_back({u0, l0, u1});
    faces.push_back({u1, l0, l1});
    faces.push_back({11, l1, l0});
  }

  for (int level = 0; level < subdivisions; ++level) {
    std::unordered_map<std::uint64_t, Index> midpoint;
    auto split = [&](Index a, Index b) {
      const auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      positions.push_back((positions[a] + positions[b]).normalized());
      const auto id = static_cast<Index>(positions.size() - 1);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    next.reserve(faces.size() * 4);
    for (const Face& f : faces) {
      const Index ab = split(f[0], f[1]);
      const Index bc = split(f[1], f[2]);
      const Index ca = split(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  orient_outward(positions, faces);

  SurfaceMesh mesh = SurfaceMesh::from_positions(std::move(positions), std::move(faces));
  mesh.tags["family"] = "icosphere";
  mesh.metadata["subdivisions"] = subdivisions;
  return mesh;
}

SurfaceMesh generate_flat_torus(int nx, int ny, double Lx, double Ly) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("flat torus: nx and ny must be >= 3");
  if (!(Lx > 0.0) || !(Ly > 0.0)) throw std::invalid_argument("flat torus: side lengths must be positive");
  if (static_cast<long long>(nx) * ny > 50'000'000LL) throw std::length_error("flat torus: grid too large");

  const double dx = Lx / nx;
  const double dy = Ly / ny;
  const double diag = std::hypot(dx, dy);
  auto id = [&](int i, int j) { return static_cast<Index>(((j + ny) % ny) * nx + ((i + nx) % nx)); };

  std::vector<Face> faces;
  std::vector<std::array<double, 3>> lengths;
  faces.reserve(2 * static_cast<std::size_t>(nx) * ny);
  lengths.reserve(faces.capacity());
  // Face order is cell-major: faces 2c and 2c+1 belong to cell c = j*nx + i.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      lengths.push_back({dx, dy, diag});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      lengths.push_back({diag, dx, dy});
    }
  }
  SurfaceMesh mesh = SurfaceMesh::from_lengths(static_cast<std::size_t>(nx) * ny, std::move(faces), lengths);
  mesh.tags["family"] = "flat_torus";
  mesh.metadata["nx"] = nx;
  mesh.metadata["ny"] = ny;
  mesh.metadata["Lx"] = Lx;
  mesh.metadata["Ly"] = Ly;
  return mesh;
}

SurfaceMesh generate_dumbbell(double neck_scale, int subdivisions, double neck_length) {
  if (!(neck_scale > 0.0 && neck_scale <= 1.0))
    throw std::invalid_argument("dumbbell: neck_scale must be in (0, 1]");
  if (subdivisions < 0 || subdivisions > 6) throw std::invalid_argument("dumbbell: subdivisions must be in [0, 6]");
  if (!(neck_length > 0.0)) throw std::invalid_argument("dumbbell: neck length must be positive");

  const int segments = 8 << subdivisions;
  const double h = 2.0 * kPi / segments;
  const double rho = neck_scale;
  if (rho < 0.5 * h)
    throw std::invalid_argument("dumbbell: neck radius " + std::to_string(rho) +
                                " is thinner than the mesh resolution " + std::to_string(0.5 * h));

  const double half = 0.5 * neck_length;
  const double center = half + std::sqrt(1.0 - rho * rho);
  const double junction = kPi - std::asin(rho);
  const int lobe_steps = std::max(2, static_cast<int>(std::lround(junction / h)));
  const int neck_steps = std::max(2, 2 * static_cast<int>(std::lround(neck_length / (2.0 * h))));

  std::vector<Ring> rings;
  for (int k = 0; k <= lobe_steps; ++k) {
    const double phi = junction * k / lobe_steps;
    rings.push_back({k == 0 ? 0.0 : (k == lobe_steps ? rho : std::sin(phi)), -center - std::cos(phi)});
  }
  rings.back().z = -half;
  for (int k = 1; k < neck_steps; ++k) rings.push_back({rho, -half + neck_length * k / neck_steps});
  for (int k = lobe_steps; k >= 0; --k) {
    const double phi = junction * k / lobe_steps;
    rings.push_back({k == 0 ? 0.0 : (k == lobe_steps ? rho : std::sin(phi)), center + std::cos(phi)});
  }
  rings[lobe_steps + neck_steps].z = half;
  rings[lobe_steps + neck_steps / 2].z = 0.0;

  SurfaceMesh mesh = revolve(rings, h, 12);
  mesh.tags["family"] = "dumbbell";
  mesh.metadata["neck_scale"] = neck_scale;
  mesh.metadata["neck_radius"] = rho;
  mesh.metadata["neck_length"] = neck_length;
  mesh.metadata["subdivisions"] = subdivisions;

  double cut = 0.0;
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
    const Edge& ed = mesh.edge(static_cast<Index>(e));
    if (mesh.positions()[ed.v0].z() == 0.0 && mesh.positions()[ed.v1].z() == 0.0)
      cut += mesh.edge_length(static_cast<Index>(e));
  }
  mesh.metadata["neck_cut_length"] = cut;
  return mesh;
}

SurfaceMesh generate_disk(int rings) {
  if (rings < 1 || rings > 2000) throw std::invalid_argument("disk: rings must be in [1, 2000]");
  std::vector<Ring> profile;
  for (int k = 0; k <= rings; ++k) profile.push_back({static_cast<double>(k) / rings, 0.0});
  SurfaceMesh mesh = revolve(profile, 1.0 / rings, 6);
  mesh.tags["family"] = "disk";
  mesh.metadata["rings"] = rings;
  return mesh;
}

SurfaceMesh generate_spherical_cap(double max_polar_angle, int rings) {
  if (!(max_polar_angle > 0.0 && max_polar_angle < kPi))
    throw std::invalid_argument("spherical cap: polar angle must be in (0, pi)");
  if (rings < 1 || rings > 2000) throw std::invalid_argument("spherical cap: rings must be in [1, 2000]");
  const double step = max_polar_angle / rings;
  std::vector<Ring> profile;
  for (int k = 0; k <= rings; ++k) {
    const double theta = step * k;
    profile.push_back({k == 0 ? 0.0 : std::sin(theta), std::cos(theta)});
  }
  SurfaceMesh mesh = revolve(profile, step, 6);
  mesh.tags["family"] = "spherical_cap";
  mesh.metadata["max_polar_angle"] = max_polar_angle;
  mesh.metadata["rings"] = rings;
  return mesh;
}

SurfaceMesh generate_annulus(double inner_radius, int rings) {
  if (!(inner_radius > 0.0 && inner_radius < 1.0))
    throw std::invalid_argument("annulus: inner radius must be in (0, 1)");
  if (rings < 1 || rings > 2000) throw std::invalid_argument("annulus: rings must be in [1, 2000]");
  const double step = (1.0 - inner_radius) / rings;
  std::vector<Ring> profile;
  for (int k = 0; k <= rings; ++k) profile.push_back({inner_radius + step * k, 0.0});
  SurfaceMesh mesh = revolve(profile, step, 6);
  mesh.tags["family"] = "annulus";
  mesh.metadata["inner_radius"] = inner_radius;
  mesh.metadata["rings"] = rings;
  return mesh;
}

Partition canonical_partition(const SurfaceMesh& mesh) {
  const auto it = mesh.tags.find("family");
  const std::string family = it == mesh.tags.end() ? std::string{} : it->second;
  Partition out{PartitionUnit::face, std::vector<Side>(mesh.face_count(), Side::B)};

  if (family == "icosphere" || family == "dumbbell") {
    const bool north_is_a = family == "icosphere";
    const auto& p = mesh.positions();
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      const Face& face = mesh.face(static_cast<Index>(f));
      const double z = p[face[0]].z() + p[face[1]].z() + p[face[2]].z();
      out.labels[f] = ((z > 0.0) == north_is_a) ? Side::A : Side::B;
    }
    return out;
  }
  if (family == "flat_torus") {
    const auto nx = static_cast<std::size_t>(mesh.metadata.at("nx"));
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      const std::size_t column = (f / 2) % nx;
      out.labels[f] = column < nx / 2 ? Side::A : Side::B;
    }
    return out;
  }
  throw std::invalid_argument("canonical partition: mesh family '" + family + "' has no standard cut");
}

WeightedGraph generate_random_graph(std::size_t vertex_count, double edge_probability, std::uint64_t seed) {
  if (vertex_count < 2) throw std::invalid_argument("random graph: need at least two vertices");
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
    throw std::invalid_argument("random graph: edge probability must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> conductance(0.1, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> factor(0.5, 2.0);

  const auto n = static_cast<Index>(vertex_count);
  std::vector<char> linked(vertex_count * vertex_count, 0);
  std::vector<GraphEdge> edges;
  for (Index v = 1; v < n; ++v) {
    const auto u = static_cast<Index>(std::uniform_int_distribution<Index>(0, v - 1)(rng));
    edges.push_back({u, v, conductance(rng), 1.0});
    linked[u * vertex_count + v] = 1;
  }
  for (Index u = 0; u < n; ++u)
    for (Index v = u + 1; v < n; ++v) {
      const double roll = unit(rng);
      if (linked[u * vertex_count + v] || roll >= edge_probability) continue;
      edges.push_back({u, v, conductance(rng), 1.0});
    }
  std::vector<double> weights(vertex_count, 0.0);
  for (const GraphEdge& e : edges) {
    weights[e.u] += e.conductance;
    weights[e.v] += e.conductance;
  }
  for (double& w : weights) w *= factor(rng);
  return WeightedGraph(std::move(weights), std::move(edges));
}

}  // namespace cheeger
