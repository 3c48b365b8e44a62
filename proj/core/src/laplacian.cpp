#include "cheeger/laplacian.hpp"

#include <vector>

namespace cheeger {

namespace {

SparseMatrix assemble(std::size_t n, const std::vector<Edge>& pairs, const Eigen::VectorXd& weights) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * pairs.size());
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const auto [u, v] = pairs[e];
    const double w = weights[static_cast<Eigen::Index>(e)];
    triplets.emplace_back(u, v, -w);
    triplets.emplace_back(v, u, -w);
    triplets.emplace_back(u, u, w);
    triplets.emplace_back(v, v, w);
  }
  const auto size = static_cast<Eigen::Index>(n);
  SparseMatrix L(size, size);
  L.setFromTriplets(triplets.begin(), triplets.end());
  L.makeCompressed();
  return L;
}

}  // namespace

Eigen::VectorXd cotan_weights(const SurfaceMesh& mesh) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.edge_count()));
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto& fe = mesh.face_edges(static_cast<Index>(f));
    for (int k = 0; k < 3; ++k) w[fe[k]] += 0.5 * mesh.opposite_cotan(static_cast<Index>(f), k);
  }
  return w;
}

LaplaceOperator laplacian(const SurfaceMesh& mesh) {
  const auto edges = mesh.edges();
  LaplaceOperator op;
  op.stiffness = assemble(mesh.vertex_count(), {edges.begin(), edges.end()}, cotan_weights(mesh));
  op.mass = Eigen::Map<const Eigen::VectorXd>(mesh.vertex_areas().data(),
                                              static_cast<Eigen::Index>(mesh.vertex_count()));
  return op;
}

LaplaceOperator laplacian(const WeightedGraph& graph) {
  std::vector<Edge> pairs;
  Eigen::VectorXd w(static_cast<Eigen::Index>(graph.edge_count()));
  pairs.reserve(graph.edge_count());
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const GraphEdge& ed = graph.edge(static_cast<Index>(e));
    pairs.push_back({ed.u, ed.v});
    w[static_cast<Eigen::Index>(e)] = ed.conductance;
  }
  LaplaceOperator op;
  op.stiffness = assemble(graph.vertex_count(), pairs, w);
  op.mass = Eigen::Map<const Eigen::VectorXd>(graph.vertex_weights().data(),
                                              static_cast<Eigen::Index>(graph.vertex_count()));
  return op;
}

}  // namespace cheeger
