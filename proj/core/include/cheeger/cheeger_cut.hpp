#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Core>

#include "cheeger/partition.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/surface_mesh.hpp"
#include "cheeger/weighted_graph.hpp"

namespace cheeger {

enum class CheegerMethod { exact, sweep };

/// How a vertex function becomes a face partition in a mesh sweep.
enum class SweepRule { vertex_majority, face_mean };

[[nodiscard]] std::string to_string(CheegerMethod method);
[[nodiscard]] std::string to_string(SweepRule rule);

/// A bipartition together with its isoperimetric ratio
/// h = Vol(Sigma) / min(Vol(A), Vol(B)).
struct CheegerResult {
  double h = 0.0;
  Partition partition;
  PartitionMeasures measures;
  CheegerMethod method = CheegerMethod::exact;
  SweepRule rule = SweepRule::vertex_majority;  ///< mesh sweeps only
  std::size_t candidates = 1;                   ///< functions swept
};

/// Largest graph accepted by cheeger_exact.
inline constexpr std::size_t kExactVertexLimit = 22;

/// Global minimum over all bipartitions by Gray-code enumeration. Side A is
/// the side holding vertex 0; among ratios equal to 1e-12 relative the
/// lexicographically smallest A wins. Throws std::length_error above
/// kExactVertexLimit vertices.
[[nodiscard]] CheegerResult cheeger_exact(const WeightedGraph& graph);

/// Best threshold cut of a vertex function. Vertices are sorted by value
/// (ties by id) and the lowest k go to side A for every k = 1..n-1. Cuts
/// that leave a side empty are skipped. Throws std::invalid_argument when
/// the function is constant or no admissible cut exists.
[[nodiscard]] CheegerResult cheeger_sweep(const WeightedGraph& graph, std::span<const double> values);

/// Mesh sweep. Two families of thresholds are scanned and the better cut is
/// kept: vertex thresholds with each face taking the majority label of its
/// corners (ties to A), and thresholds of the face means of the function.
/// Majority rounding alone turns a level line crossing a strip of triangles
/// into a sawtooth of the crossed edges.
[[nodiscard]] CheegerResult cheeger_sweep(const SurfaceMesh& mesh, std::span<const double> values);

/// Number of leading eigenpairs whose eigenvalue is within rel_tol of the
/// first one.
[[nodiscard]] std::size_t leading_cluster_size(const std::vector<SpectralResult>& pairs, double rel_tol = 1e-6);

struct EigenspaceSweepOptions {
  std::size_t kernel_samples = 64;  ///< vertices whose kernel direction is swept
  int kurtosis_iterations = 200;
};

/// Sweep over a degenerate eigenspace, where a single eigenvector is an
/// arbitrary member. The columns of basis must be M-orthonormal. Swept
/// functions: the basis columns; the projection of a point mass at every
/// stride-th vertex (starting at vertex 0); and local minimizers of the
/// fourth moment sum M f^4 on the unit sphere of the span, started from
/// each of the former. With one column this is cheeger_sweep.
[[nodiscard]] CheegerResult cheeger_sweep_eigenspace(const SurfaceMesh& mesh, const Eigen::MatrixXd& basis,
                                                     const Eigen::VectorXd& mass,
                                                     const EigenspaceSweepOptions& options = {});

}  // namespace cheeger
