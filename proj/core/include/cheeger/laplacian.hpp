#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cheeger/surface_mesh.hpp"
#include "cheeger/weighted_graph.hpp"

namespace cheeger {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete Laplacian as a stiffness/mass pair: L u = lambda M u.
struct LaplaceOperator {
  SparseMatrix stiffness;  ///< symmetric positive semidefinite, L 1 = 0
  Eigen::VectorXd mass;    ///< diagonal of the lumped mass, strictly positive
};

/// Cotangent stiffness from intrinsic edge lengths with barycentric lumped
/// vertex areas as mass.
[[nodiscard]] LaplaceOperator laplacian(const SurfaceMesh& mesh);

/// Conductance Laplacian with vertex weights as mass.
[[nodiscard]] LaplaceOperator laplacian(const WeightedGraph& graph);

/// Cotangent weight of every edge: half the sum of the cotangents of the
/// opposite angles.
[[nodiscard]] Eigen::VectorXd cotan_weights(const SurfaceMesh& mesh);

}  // namespace cheeger
