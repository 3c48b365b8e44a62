#include "cheeger/buser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cheeger/distance.hpp"
#include "cheeger/laplacian.hpp"

namespace cheeger {

double local_isoperimetric_ratio(BallProbe& probe, Index x, double r, double K, int n) {
  if (!(r > 0.0)) throw std::invalid_argument("local ratio: r must be > 0");
  if (n < 2 || !(K >= 0.0)) throw std::invalid_argument("local ratio: need n >= 2 and K >= 0");
  const auto [inner, outer] = probe.measure_pair(x, r, 3.0 * r);
  const double smaller = std::min(inner.volume_a, inner.volume_b);
  if (!(smaller > 0.0)) return std::numeric_limits<double>::infinity();
  return outer.interface * r * std::exp(3.0 * (n - 1) * std::sqrt(K) * r) / smaller;
}

double local_isoperimetric_ratio(const SurfaceMesh& mesh, const Partition& partition, Index x, double r, double K,
                                 int n) {
  if (x < 0 || static_cast<std::size_t>(x) >= mesh.vertex_count())
    throw std::out_of_range("local ratio: vertex out of range");
  BallProbe probe(mesh, &partition);
  return local_isoperimetric_ratio(probe, x, r, K, n);
}

std::size_t TildeDecomposition::count(TildeClass c) const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

TildeDecomposition classify_tilde_sets(const SurfaceMesh& mesh, const Partition& partition, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("tilde sets: r must be > 0");
  const std::size_t nv = mesh.vertex_count();
  TildeDecomposition out;
  out.radius = r;
  out.balance.resize(nv);
  out.ball_volume.resize(nv);
  out.classes.assign(nv, TildeClass::sigma);

  BallProbe probe(mesh, &partition);
  std::vector<char> level(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    const BallMeasures m = probe.measure(static_cast<Index>(v), r);
    const double g = m.volume_a - m.volume_b;
    out.balance[v] = g;
    out.ball_volume[v] = m.volume;
    level[v] = std::abs(g) <= 1e-12 * m.volume;
  }
  for (const Edge& e : mesh.edges()) {
    const double g0 = out.balance[e.v0];
    const double g1 = out.balance[e.v1];
    if (level[e.v0] || level[e.v1] || (g0 > 0.0) == (g1 > 0.0)) continue;
    if (std::abs(g0) <= std::abs(g1)) level[e.v0] = 2;
    if (std::abs(g1) <= std::abs(g0)) level[e.v1] = 2;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (level[v]) continue;
    out.classes[v] = out.balance[v] > 0.0 ? TildeClass::a : TildeClass::b;
  }
  return out;
}

CoverResult gromov_cover(const SurfaceMesh& mesh, double r, const TildeDecomposition& tilde) {
  if (!(r > 0.0)) throw std::invalid_argument("cover: r must be > 0");
  const std::size_t nv = mesh.vertex_count();
  if (tilde.classes.size() != nv) throw std::invalid_argument("cover: decomposition size mismatch");

  CoverResult out;
  BoundedDijkstra dijkstra(mesh.adjacency());
  std::vector<double> nearest(nv, kUnreached);
  for (TildeClass cls : {TildeClass::sigma, TildeClass::b, TildeClass::a}) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (tilde.classes[v] != cls || nearest[v] < r) continue;
      out.centers.push_back(static_cast<Index>(v));
      for (const auto& [w, d] : dijkstra.run(static_cast<Index>(v), r)) nearest[w] = std::min(nearest[w], d);
    }
    if (cls == TildeClass::sigma) out.s = out.centers.size();
    if (cls == TildeClass::b) out.m = out.centers.size();
  }
  out.k = out.centers.size();

  std::vector<int> hits(nv, 0);
  for (Index c : out.centers)
    for (const auto& [w, d] : dijkstra.run(c, 3.0 * r)) ++hits[w];
  out.multiplicity = nv ? *std::max_element(hits.begin(), hits.end()) : 0;
  return out;
}

BuserFunction buser_test_function(const SurfaceMesh& mesh, const TildeDecomposition& tilde, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("test function: r must be > 0");
  const std::size_t nv = mesh.vertex_count();
  if (tilde.classes.size() != nv) throw std::invalid_argument("test function: decomposition size mismatch");

  BuserFunction out;
  std::vector<Index> sigma;
  for (std::size_t v = 0; v < nv; ++v) {
    const double area = mesh.vertex_area(static_cast<Index>(v));
    switch (tilde.classes[v]) {
      case TildeClass::sigma: sigma.push_back(static_cast<Index>(v)); break;
      case TildeClass::a: out.vol_a += area; break;
      case TildeClass::b: out.vol_b += area; break;
    }
  }
  if (sigma.empty()) throw std::domain_error("test function: sigma-tilde is empty although both sides are present");
  if (out.vol_a == 0.0 || out.vol_b == 0.0) throw std::invalid_argument("test function: a side of the tilde split is empty");

  out.rho = geodesic_distance(mesh, sigma).values;
  out.values.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    const double rho = out.rho[v];
    const double ramp = std::min(rho / r, 1.0);
    if (tilde.classes[v] == TildeClass::a) out.values[v] = ramp * out.vol_b;
    if (tilde.classes[v] == TildeClass::b) out.values[v] = -ramp * out.vol_a;
    const double area = mesh.vertex_area(static_cast<Index>(v));
    if (rho <= r) out.vol_tube += area;
    out.mean += area * out.values[v];
  }
  return out;
}

BuserReport verify_buser(const SurfaceMesh& mesh, const Partition& partition, const BuserOptions& options) {
  return verify_buser(mesh, partition, lambda1(laplacian(mesh), options.spectral).lambda1, options);
}

BuserReport verify_buser(const SurfaceMesh& mesh, const Partition& partition, double lambda1_value,
                         const BuserOptions& options) {
  if (!(options.K >= 0.0)) throw std::invalid_argument("buser: K must be >= 0");
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("buser: epsilon must be > 0");
  BuserReport out;
  const PartitionMeasures pm = measure(mesh, partition);
  out.h = pm.ratio();
  if (!(out.h > 0.0)) throw std::invalid_argument("buser: partition has an empty interface");
  double scale = 1.0 / out.h;
  if (options.K > 0.0) scale = std::min(scale, 1.0 / std::sqrt(options.K));
  out.r = options.epsilon * scale;
  out.lambda1 = lambda1_value;

  const TildeDecomposition tilde = classify_tilde_sets(mesh, partition, out.r);
  out.sigma_count = tilde.count(TildeClass::sigma);
  out.a_count = tilde.count(TildeClass::a);
  out.b_count = tilde.count(TildeClass::b);
  out.cover = gromov_cover(mesh, out.r, tilde);

  const BuserFunction f = buser_test_function(mesh, tilde, out.r);
  const LaplaceOperator op = laplacian(mesh);
  out.rayleigh = rayleigh_quotient(op, Eigen::Map<const Eigen::VectorXd>(f.values.data(), f.values.size()));
  out.c_emp = out.rayleigh * out.r / out.h;
  out.mean_abs = std::abs(f.mean);
  out.mean_bound = f.vol_tube * mesh.total_area();
  out.variational_ok = out.lambda1 <= out.rayleigh * (1.0 + 1e-9);
  const auto lengths = mesh.edge_lengths();
  out.resolved = out.r >= 2.0 * *std::max_element(lengths.begin(), lengths.end());
  return out;
}

double diameter_lower_bound(int n, double K, double D, double C_n, bool include_sqrt_k) {
  if (n < 2 || !(K >= 0.0)) throw std::invalid_argument("diameter bound: need n >= 2 and K >= 0");
  if (!(D > 0.0)) throw std::invalid_argument("diameter bound: D must be > 0");
  const double s = include_sqrt_k ? std::sqrt(K) : 1.0;
  return C_n / D * std::exp(-3.0 * (n - 1) * s * D);
}

}  // namespace cheeger
