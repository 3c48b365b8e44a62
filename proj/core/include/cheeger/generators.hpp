#pragma once

#include <cstdint>

#include "cheeger/partition.hpp"
#include "cheeger/surface_mesh.hpp"
#include "cheeger/weighted_graph.hpp"

namespace cheeger {

/// Unit icosphere. The base icosahedron has a vertex at each pole, so from
/// level 1 on the equator z = 0 is an edge loop. Level must be in [0, 8].
[[nodiscard]] SurfaceMesh generate_icosphere(int subdivisions);

/// Periodic nx-by-ny grid on [0,Lx) x [0,Ly), each cell split along its
/// (i,j)-(i+1,j+1) diagonal. Intrinsic lengths only; no embedding.
[[nodiscard]] SurfaceMesh generate_flat_torus(int nx, int ny, double Lx, double Ly);

/// Two unit-sphere lobes joined by a cylinder of radius neck_scale and the
/// given length, meshed as a surface of revolution around the z axis with
/// target edge length 2 pi / (8 * 2^subdivisions). The ring at z = 0 is the
/// neck midline. Throws when the neck radius is below half the edge length.
[[nodiscard]] SurfaceMesh generate_dumbbell(double neck_scale, int subdivisions, double neck_length = 1.0);

/// Flat unit disk from concentric rings (boundary = unit circle).
[[nodiscard]] SurfaceMesh generate_disk(int rings);

/// Geodesic cap {polar angle <= max_polar_angle} of the unit sphere.
[[nodiscard]] SurfaceMesh generate_spherical_cap(double max_polar_angle, int rings);

/// Flat annulus inner_radius <= r <= 1.
[[nodiscard]] SurfaceMesh generate_annulus(double inner_radius, int rings);

/// Random connected weighted graph from a seed: a random spanning tree
/// (vertex v > 0 attaches to a uniformly chosen earlier vertex) plus every
/// other pair independently with the given probability. Conductances are
/// uniform in [0.1, 1], lengths are 1, and the weight of a vertex is its
/// conductance degree times a uniform factor in [0.5, 2], so every vertex
/// has degree at most twice its weight.
[[nodiscard]] WeightedGraph generate_random_graph(std::size_t vertex_count, double edge_probability,
                                                  std::uint64_t seed);

/// Standard cut of a generated model surface:
///   icosphere: faces above the equator are side A;
///   flat torus: cells with column index < nx/2 are side A (two straight loops);
///   dumbbell: faces below the neck midline are side A.
/// Throws for meshes without a known family.
[[nodiscard]] Partition canonical_partition(const SurfaceMesh& mesh);

}  // namespace cheeger
