#include "cheeger/cheeger_cut.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cheeger {

std::string to_string(CheegerMethod method) { return method == CheegerMethod::exact ? "exact" : "sweep"; }

std::string to_string(SweepRule rule) { return rule == SweepRule::face_mean ? "face-mean" : "vertex-majority"; }

namespace {

// Lexicographic order of the sorted member lists of two vertex sets.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  for (int i = 0; i < 32; ++i) {
    const bool in_a = (a >> i) & 1u;
    const bool in_b = (b >> i) & 1u;
    if (in_a == in_b) continue;
    // first difference at element i: the list holding i is smaller unless
    // the other list has already ended
    const std::uint32_t above = ~((2u << i) - 1u);
    return in_a ? (b & above) != 0 : (a & above) == 0;
  }
  return false;
}

CheegerResult finish(const WeightedGraph& graph, Partition partition, CheegerMethod method) {
  CheegerResult out;
  out.measures = measure(graph, partition);
  out.h = out.measures.ratio();
  out.partition = std::move(partition);
  out.method = method;
  return out;
}

CheegerResult finish(const SurfaceMesh& mesh, Partition partition, CheegerMethod method) {
  CheegerResult out;
  out.measures = measure(mesh, partition);
  out.h = out.measures.ratio();
  out.partition = std::move(partition);
  out.method = method;
  return out;
}

std::vector<Index> sweep_order(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sweep: empty function");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("sweep: function has non-finite values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw std::invalid_argument("sweep: function is constant");
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] < values[b]; });
  return order;
}

}  // namespace

CheegerResult cheeger_exact(const WeightedGraph& graph) {
  const std::size_t n = graph.vertex_count();
  if (n > kExactVertexLimit)
    throw std::length_error("cheeger_exact: " + std::to_string(n) + " vertices exceeds the enumeration limit of " +
                            std::to_string(kExactVertexLimit));
  if (n < 2) throw std::invalid_argument("cheeger_exact: need at least two vertices");

  const Adjacency& adj = graph.adjacency();
  const double total = graph.total_weight();
  std::uint32_t mask = 1u;  // bit v set: v on side A
  double vol_a = graph.vertex_weight(0);
  double cut = 0.0;
  for (Index a = adj.offsets[0]; a < adj.offsets[1]; ++a) cut += graph.edge(adj.edge_ids[a]).conductance;

  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::uint32_t best_mask = 0;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&]() {
    if (mask == full) return;
    const double ratio = cut / std::min(vol_a, total - vol_a);
    if (ratio < best * (1.0 - 1e-12)) {
      best = ratio;
      best_mask = mask;
    } else if (ratio <= best * (1.0 + 1e-12) && lex_less(mask, best_mask)) {
      best = std::min(best, ratio);
      best_mask = mask;
    }
  };
  consider();

  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < steps; ++i) {
    const Index v = std::countr_zero(i) + 1;
    const bool joining = !((mask >> v) & 1u);
    mask ^= 1u << v;
    vol_a += joining ? graph.vertex_weight(v) : -graph.vertex_weight(v);
    for (Index a = adj.offsets[v]; a < adj.offsets[v + 1]; ++a) {
      const bool neighbor_in_a = (mask >> adj.targets[a]) & 1u;
      const double c = graph.edge(adj.edge_ids[a]).conductance;
      // after the move v and its neighbor are on the same side iff this holds
      cut += (neighbor_in_a == joining) ? -c : c;
    }
    consider();
  }

  Partition p{PartitionUnit::vertex, std::vector<Side>(n, Side::B)};
  for (std::size_t v = 0; v < n; ++v)
    if ((best_mask >> v) & 1u) p.labels[v] = Side::A;
  return finish(graph, std::move(p), CheegerMethod::exact);
}

CheegerResult cheeger_sweep(const WeightedGraph& graph, std::span<const double> values) {
  if (values.size() != graph.vertex_count()) throw std::invalid_argument("sweep: function size mismatch");
  const auto order = sweep_order(values);
  const Adjacency& adj = graph.adjacency();
  const double total = graph.total_weight();
  std::vector<char> in_a(values.size(), 0);
  double vol_a = 0.0;
  double cut = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const Index v = order[k];
    in_a[v] = 1;
    vol_a += graph.vertex_weight(v);
    for (Index a = adj.offsets[v]; a < adj.offsets[v + 1]; ++a) {
      const double c = graph.edge(adj.edge_ids[a]).conductance;
      cut += in_a[adj.targets[a]] ? -c : c;
    }
    const double ratio = cut / std::min(vol_a, total - vol_a);
    if (ratio < best) {
      best = ratio;
      best_k = k + 1;
    }
  }
  Partition p{PartitionUnit::vertex, std::vector<Side>(values.size(), Side::B)};
  for (std::size_t k = 0; k < best_k; ++k) p.labels[order[k]] = Side::A;
  return finish(graph, std::move(p), CheegerMethod::sweep);
}

namespace {

struct SweepPick {
  double ratio = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
};

SweepPick majority_sweep(const SurfaceMesh& mesh, const std::vector<Index>& order) {
  const std::size_t nf = mesh.face_count();
  const double total = mesh.total_area();
  std::vector<std::uint8_t> corners_in_a(nf, 0);
  std::vector<char> face_a(nf, 0);
  std::size_t faces_a = 0;
  double vol_a = 0.0;
  double cut = 0.0;
  SweepPick best;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    for (Index f : mesh.vertex_faces(order[k])) {
      // majority with ties to A: a face joins A once two corners are in A
      if (++corners_in_a[f] != 2) continue;
      face_a[f] = 1;
      ++faces_a;
      vol_a += mesh.face_area(f);
      for (Index e : mesh.face_edges(f)) {
        const auto& inc = mesh.edge_faces(e);
        if (inc[1] == kNoIndex) continue;
        const Index other = inc[0] == f ? inc[1] : inc[0];
        cut += face_a[other] ? -mesh.edge_length(e) : mesh.edge_length(e);
      }
    }
    if (faces_a == 0 || faces_a == nf) continue;
    const double ratio = cut / std::min(vol_a, total - vol_a);
    if (ratio < best.ratio) best = {ratio, k + 1};
  }
  return best;
}

SweepPick face_sweep(const SurfaceMesh& mesh, const std::vector<Index>& face_order) {
  const std::size_t nf = mesh.face_count();
  const double total = mesh.total_area();
  std::vector<char> face_a(nf, 0);
  double vol_a = 0.0;
  double cut = 0.0;
  SweepPick best;
  for (std::size_t k = 0; k + 1 < nf; ++k) {
    const Index f = face_order[k];
    face_a[f] = 1;
    vol_a += mesh.face_area(f);
    for (Index e : mesh.face_edges(f)) {
      const auto& inc = mesh.edge_faces(e);
      if (inc[1] == kNoIndex) continue;
      const Index other = inc[0] == f ? inc[1] : inc[0];
      cut += face_a[other] ? -mesh.edge_length(e) : mesh.edge_length(e);
    }
    const double ratio = cut / std::min(vol_a, total - vol_a);
    if (ratio < best.ratio) best = {ratio, k + 1};
  }
  return best;
}

struct MeshSweep {
  SweepPick pick;
  SweepRule rule = SweepRule::vertex_majority;
  std::vector<Index> order;
};

MeshSweep best_mesh_sweep(const SurfaceMesh& mesh, std::span<const double> values) {
  if (values.size() != mesh.vertex_count()) throw std::invalid_argument("sweep: function size mismatch");
  MeshSweep out;
  out.order = sweep_order(values);
  out.pick = majority_sweep(mesh, out.order);

  std::vector<double> face_values(mesh.face_count());
  for (std::size_t f = 0; f < face_values.size(); ++f) {
    const Face& face = mesh.face(static_cast<Index>(f));
    face_values[f] = (values[face[0]] + values[face[1]] + values[face[2]]) / 3.0;
  }
  const auto [lo, hi] = std::minmax_element(face_values.begin(), face_values.end());
  if (*lo < *hi) {
    auto face_order = sweep_order(face_values);
    const SweepPick faces = face_sweep(mesh, face_order);
    if (faces.ratio < out.pick.ratio) {
      out.pick = faces;
      out.rule = SweepRule::face_mean;
      out.order = std::move(face_order);
    }
  }
  if (out.pick.k == 0) throw std::invalid_argument("sweep: no threshold splits the faces");
  return out;
}

Partition sweep_partition(const SurfaceMesh& mesh, const MeshSweep& sweep) {
  if (sweep.rule == SweepRule::face_mean) {
    Partition p{PartitionUnit::face, std::vector<Side>(mesh.face_count(), Side::B)};
    for (std::size_t k = 0; k < sweep.pick.k; ++k) p.labels[sweep.order[k]] = Side::A;
    return p;
  }
  std::vector<Side> vertex_labels(mesh.vertex_count(), Side::B);
  for (std::size_t k = 0; k < sweep.pick.k; ++k) vertex_labels[sweep.order[k]] = Side::A;
  return faces_from_vertex_labels(mesh, vertex_labels);
}

// Projected gradient descent of sum_v m_v (basis c)_v^4 on |c| = 1.
Eigen::VectorXd min_fourth_moment(const Eigen::MatrixXd& basis, const Eigen::VectorXd& mass, Eigen::VectorXd c,
                                  int iterations) {
  auto moment = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd f = basis * x;
    return mass.dot(f.array().pow(4).matrix());
  };
  c.normalize();
  double value = moment(c);
  double step = 0.1;
  for (int it = 0; it < iterations && step > 1e-12; ++it) {
    const Eigen::VectorXd f = basis * c;
    Eigen::VectorXd grad = 4.0 * basis.transpose() * mass.cwiseProduct(f.array().cube().matrix());
    grad -= grad.dot(c) * c;
    if (grad.norm() <= 1e-12 * std::max(1.0, value)) break;
    Eigen::VectorXd next = (c - step * grad / grad.norm()).normalized();
    const double next_value = moment(next);
    if (next_value < value) {
      c = next;
      value = next_value;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return c;
}

}  // namespace

CheegerResult cheeger_sweep(const SurfaceMesh& mesh, std::span<const double> values) {
  const MeshSweep sweep = best_mesh_sweep(mesh, values);
  CheegerResult out = finish(mesh, sweep_partition(mesh, sweep), CheegerMethod::sweep);
  out.rule = sweep.rule;
  return out;
}

std::size_t leading_cluster_size(const std::vector<SpectralResult>& pairs, double rel_tol) {
  if (pairs.empty()) return 0;
  const double first = pairs.front().lambda1;
  std::size_t k = 1;
  while (k < pairs.size() && pairs[k].lambda1 <= first * (1.0 + rel_tol)) ++k;
  return k;
}

CheegerResult cheeger_sweep_eigenspace(const SurfaceMesh& mesh, const Eigen::MatrixXd& basis,
                                       const Eigen::VectorXd& mass, const EigenspaceSweepOptions& options) {
  const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
  if (basis.rows() != n || mass.size() != n || basis.cols() < 1)
    throw std::invalid_argument("eigenspace sweep: basis and mass must match the mesh");
  const Eigen::Index d = basis.cols();

  std::vector<Eigen::VectorXd> starts;
  for (Eigen::Index j = 0; j < d; ++j) starts.push_back(Eigen::VectorXd::Unit(d, j));
  if (d > 1 && options.kernel_samples > 0) {
    const auto samples = static_cast<Eigen::Index>(options.kernel_samples);
    const Eigen::Index stride = std::max<Eigen::Index>(1, (n + samples - 1) / samples);
    for (Eigen::Index v = 0; v < n; v += stride) {
      Eigen::VectorXd c = basis.row(v).transpose();
      if (c.norm() > 1e-12) starts.push_back(c.normalized());
    }
  }
  std::vector<Eigen::VectorXd> candidates = starts;
  if (d > 1)
    for (const auto& c : starts) candidates.push_back(min_fourth_moment(basis, mass, c, options.kurtosis_iterations));

  MeshSweep best;
  bool have = false;
  for (const auto& c : candidates) {
    const Eigen::VectorXd f = basis * c;
    MeshSweep sweep;
    try {
      sweep = best_mesh_sweep(mesh, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
    } catch (const std::invalid_argument&) {
      continue;  // constant up to rounding
    }
    if (!have || sweep.pick.ratio < best.pick.ratio) {
      best = std::move(sweep);
      have = true;
    }
  }
  if (!have) throw std::invalid_argument("eigenspace sweep: no candidate function splits the mesh");
  CheegerResult out = finish(mesh, sweep_partition(mesh, best), CheegerMethod::sweep);
  out.rule = best.rule;
  out.candidates = candidates.size();
  return out;
}

}  // namespace cheeger
