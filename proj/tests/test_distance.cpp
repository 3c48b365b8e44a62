#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cheeger/ball.hpp"
#include "cheeger/distance.hpp"
#include "cheeger/generators.hpp"
#include "grid_metric.hpp"

using namespace cheeger;
constexpr double pi = std::numbers::pi;

namespace {

// All-pairs shortest paths by Floyd-Warshall.
std::vector<std::vector<double>> floyd(const Adjacency& adj) {
  const std::size_t n = adj.vertex_count();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kUnreached));
  for (std::size_t v = 0; v < n; ++v) {
    d[v][v] = 0.0;
    for (Index a = adj.offsets[v]; a < adj.offsets[v + 1]; ++a)
      d[v][adj.targets[a]] = std::min(d[v][adj.targets[a]], adj.lengths[a]);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

double brute_diameter(const Adjacency& adj) {
  double best = 0.0;
  for (const auto& row : floyd(adj))
    for (double x : row)
      if (std::isfinite(x)) best = std::max(best, x);
  return best;
}

WeightedGraph path_graph(std::size_t n) {
  std::vector<std::pair<Index, Index>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(static_cast<Index>(i), static_cast<Index>(i + 1));
  return WeightedGraph::unit(n, edges);
}

}  // namespace

TEST_CASE("distance from every vertex is zero") {
  const SurfaceMesh m = generate_icosphere(1);
  std::vector<Index> all(m.vertex_count());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<Index>(v);
  const DistanceField d = geodesic_distance(m, all);
  for (double x : d.values) CHECK(x == 0.0);
  CHECK(d.unreached == 0);
}

TEST_CASE("path graph distances count hops") {
  const WeightedGraph g = path_graph(6);
  const Index src = 0;
  const DistanceField d = geodesic_distance(g, std::span<const Index>(&src, 1));
  for (std::size_t v = 0; v < 6; ++v) CHECK(d.values[v] == static_cast<double>(v));
  const DistanceField cut = geodesic_distance(g, std::span<const Index>(&src, 1), 2.5);
  CHECK(cut.unreached == 3);
  CHECK(cut.values[2] == 2.0);
  CHECK(std::isinf(cut.values[3]));
}

TEST_CASE("unreachable vertices are flagged") {
  Adjacency adj;
  adj.offsets = {0, 1, 2, 3, 4};
  adj.targets = {1, 0, 3, 2};
  adj.lengths = {1.0, 1.0, 2.0, 2.0};
  adj.edge_ids = {0, 0, 1, 1};
  const Index src = 0;
  const DistanceField d = geodesic_distance(adj, std::span<const Index>(&src, 1));
  CHECK(d.unreached == 2);
  CHECK(d.values[1] == 1.0);
  CHECK(graph_diameter(adj) == 2.0);
}

TEST_CASE("source validation") {
  const WeightedGraph g = path_graph(3);
  CHECK_THROWS_AS((void)geodesic_distance(g, std::span<const Index>{}), std::invalid_argument);
  const Index bad = 7;
  CHECK_THROWS_AS((void)geodesic_distance(g, std::span<const Index>(&bad, 1)), std::invalid_argument);
}

TEST_CASE("pole to pole on the icosphere") {
  const SurfaceMesh m = generate_icosphere(4);
  const Index north = 0;
  const DistanceField d = geodesic_distance(m, std::span<const Index>(&north, 1));
  Index south = 0;
  for (std::size_t v = 0; v < m.vertex_count(); ++v)
    if (m.positions()[v].z() < m.positions()[south].z()) south = static_cast<Index>(v);
  // Edge paths follow the icosahedral great circles through a ring vertex on
  // each side, so the graph distance tends to 3 atan 2 rather than pi.
  const double limit = 3.0 * std::atan(2.0);
  CHECK(d.values[south] >= pi);
  CHECK(d.values[south] <= limit);
  CHECK(std::abs(d.values[south] - limit) <= 1e-3);
  CHECK(std::abs(d.values[south] - pi) <= 0.06 * pi);
}

TEST_CASE("edge triangle inequality and symmetry") {
  const SurfaceMesh m = generate_dumbbell(0.4, 2);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> pick(0, static_cast<Index>(m.vertex_count() - 1));
  for (int k = 0; k < 20; ++k) {
    const Index u = pick(rng), v = pick(rng);
    const auto du = geodesic_distance(m, std::span<const Index>(&u, 1));
    const auto dv = geodesic_distance(m, std::span<const Index>(&v, 1));
    CHECK(std::abs(du.values[v] - dv.values[u]) <= 1e-12);
    CHECK(du.values[u] == 0.0);
    for (const Edge& e : m.edges()) {
      const double len = m.edge_length(m.find_edge(e.v0, e.v1));
      CHECK(du.values[e.v1] <= du.values[e.v0] + len + 1e-15);
      CHECK(du.values[e.v0] <= du.values[e.v1] + len + 1e-15);
    }
  }
}

TEST_CASE("torus distances follow the grid metric") {
  const int n = 20;
  const double h = 1.0 / n;
  const SurfaceMesh t = generate_flat_torus(n, n, 1.0, 1.0);
  for (Index src : {Index{0}, Index{7 * n + 3}}) {
    const DistanceField d = geodesic_distance(t, std::span<const Index>(&src, 1));
    const int si = src % n, sj = src / n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        CHECK(d.values[j * n + i] == doctest::Approx(grid::torus_distance(i - si, j - sj, n, h)).epsilon(1e-12));
  }
}

TEST_CASE("diameter matches all-pairs shortest paths") {
  std::vector<Adjacency> cases;
  cases.push_back(generate_icosphere(2).adjacency());
  cases.push_back(generate_flat_torus(7, 5, 1.0, 1.3).adjacency());
  cases.push_back(generate_disk(6).adjacency());
  cases.push_back(generate_annulus(0.4, 5).adjacency());
  cases.push_back(generate_dumbbell(0.5, 1).adjacency());
  for (std::uint64_t s = 0; s < 20; ++s) cases.push_back(generate_random_graph(4 + s % 12, 0.2, s).adjacency());
  for (auto& adj : cases) {
    // Random lengths exercise the bounding with non-unit weights.
    std::mt19937_64 rng(adj.vertex_count());
    std::vector<double> len(adj.lengths.size());
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<double> per_edge(*std::max_element(adj.edge_ids.begin(), adj.edge_ids.end()) + 1);
    for (double& x : per_edge) x = u(rng);
    Adjacency scrambled = adj;
    for (std::size_t a = 0; a < adj.lengths.size(); ++a) scrambled.lengths[a] = per_edge[adj.edge_ids[a]];
    CHECK(graph_diameter(adj) == doctest::Approx(brute_diameter(adj)).epsilon(1e-12));
    CHECK(graph_diameter(scrambled) == doctest::Approx(brute_diameter(scrambled)).epsilon(1e-12));
  }
}

TEST_CASE("bounded dijkstra matches the full field") {
  const SurfaceMesh m = generate_icosphere(3);
  BoundedDijkstra bd(m.adjacency());
  for (Index src : {Index{0}, Index{17}, Index{400}}) {
    const auto full = geodesic_distance(m, std::span<const Index>(&src, 1));
    const auto settled = bd.run(src, 0.6);
    std::size_t inside = 0;
    for (double x : full.values) inside += x <= 0.6;
    CHECK(settled.size() == inside);
    double prev = 0.0;
    for (const auto& [v, d] : settled) {
      CHECK(d == full.values[v]);
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("balls: degenerate radii") {
  const SurfaceMesh m = generate_icosphere(2);
  const Ball b0 = ball(m, 5, 0.0);
  CHECK(b0.vertices == std::vector<Index>{5});
  CHECK(b0.faces.empty());
  CHECK(b0.measures.volume == 0.0);
  const Ball all = ball(m, 5, 10.0);
  CHECK(all.vertices.size() == m.vertex_count());
  CHECK(all.faces.size() == m.face_count());
  CHECK(all.measures.volume == doctest::Approx(m.total_area()).epsilon(1e-13));
  CHECK_THROWS_AS((void)ball(m, 5, -1.0), std::invalid_argument);
}

TEST_CASE("hemisphere ball on the icosphere") {
  const SurfaceMesh m = generate_icosphere(4);
  const auto& x = m.positions();
  double hemi = 0.0;
  for (std::size_t f = 0; f < m.face_count(); ++f) {
    const auto F = m.face(f);
    if (x[F[0]].z() >= -1e-12 && x[F[1]].z() >= -1e-12 && x[F[2]].z() >= -1e-12) hemi += m.face_area(f);
  }
  CHECK(hemi == doctest::Approx(2.0 * pi).epsilon(0.005));

  // Graph distance overshoots, so the pi/2 ball sits inside the hemisphere.
  const Ball b = ball(m, 0, pi / 2.0);
  CHECK(b.measures.volume <= hemi);
  CHECK(b.measures.volume >= 0.8 * hemi);
  for (Index v : b.vertices) CHECK(x[v].z() > 0.0);

  // Radius reaching every equator vertex covers the whole hemisphere.
  const Index north = 0;
  const DistanceField d = geodesic_distance(m, std::span<const Index>(&north, 1));
  double reach = 0.0;
  for (std::size_t v = 0; v < m.vertex_count(); ++v)
    if (std::abs(x[v].z()) < 1e-12) reach = std::max(reach, d.values[v]);
  CHECK(reach <= pi / 2.0 * 2.0 / std::sqrt(3.0));
  CHECK(ball(m, 0, reach).measures.volume >= hemi - 1e-12);
}

TEST_CASE("torus balls against the grid metric") {
  const int n = 32;
  const double h = 1.0 / n;
  const SurfaceMesh t = generate_flat_torus(n, n, 1.0, 1.0);
  const Partition cut = canonical_partition(t);
  BallProbe probe(t, &cut);
  for (const auto& [ci, cj] : {std::pair{0, 10}, std::pair{5, 5}, std::pair{15, 30}}) {
    for (double r : {0.037, 0.101, 0.183}) {
      const grid::BallOracle want = grid::torus_ball(n, h, ci, cj, r);
      const BallMeasures got = probe.measure(static_cast<Index>(cj * n + ci), r);
      CHECK(got.volume == doctest::Approx(want.area).epsilon(1e-12));
      CHECK(got.volume_a == doctest::Approx(want.area_a).epsilon(1e-12));
      CHECK(got.volume_b == doctest::Approx(want.area_b).epsilon(1e-12));
      CHECK(got.interface == doctest::Approx(want.interface).epsilon(1e-12));
      const auto [inner, outer] = probe.measure_pair(static_cast<Index>(cj * n + ci), r, 3.0 * r);
      CHECK(inner.volume == got.volume);
      CHECK(outer.interface == doctest::Approx(grid::torus_ball(n, h, ci, cj, 3.0 * r).interface).epsilon(1e-12));
    }
  }
}

TEST_CASE("graph balls") {
  const WeightedGraph g({1.0, 2.0, 3.0, 4.0}, {{0, 1, 0.5, 1.0}, {1, 2, 0.25, 1.0}, {2, 3, 1.0, 1.0}});
  const Partition p{PartitionUnit::vertex, {Side::A, Side::A, Side::B, Side::B}};
  const Ball b = ball(g, 1, 1.0, &p);
  CHECK(b.measures.volume == 6.0);
  CHECK(b.measures.volume_a == 3.0);
  CHECK(b.measures.volume_b == 3.0);
  CHECK(b.measures.interface == 0.25);
  CHECK(ball(g, 0, 1.0, &p).measures.interface == 0.0);
}
