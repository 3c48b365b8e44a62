#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cheeger/generators.hpp"
#include "cheeger/riccati.hpp"
#include "cheeger/tube.hpp"

using namespace cheeger;
constexpr double pi = std::numbers::pi;

namespace {

// Profile built by hand: V(0, a) given at uniform edges, f(0) given.
TubeProfile synthetic(double f0, double width, const std::vector<double>& cumulative) {
  TubeProfile p;
  p.bin_width = width;
  p.cumulative = cumulative;
  for (std::size_t i = 0; i < cumulative.size(); ++i) p.edges.push_back(width * static_cast<double>(i));
  for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) p.bin_volume.push_back(cumulative[i + 1] - cumulative[i]);
  p.f.assign(cumulative.size(), f0);
  p.side_volume = cumulative.back();
  return p;
}

}  // namespace

TEST_CASE("signed distance on the torus") {
  const int n = 32;
  const double h = 1.0 / n;
  const SurfaceMesh t = generate_flat_torus(n, n, 1.0, 1.0);
  const SignedDistanceField f = signed_distance(t, canonical_partition(t));
  CHECK(f.seeds.size() == 2u * n);
  CHECK(std::is_sorted(f.seeds.begin(), f.seeds.end()));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double want = i <= n / 2 ? h * std::min(i, n / 2 - i) : -h * std::min(i - n / 2, n - i);
      CHECK(f.rho[j * n + i] == doctest::Approx(want).scale(1e-15));
    }
  }
}

TEST_CASE("signed distance on the sphere has the partition's sign") {
  const SurfaceMesh m = generate_icosphere(3);
  const SignedDistanceField f = signed_distance(m, canonical_partition(m));
  for (std::size_t v = 0; v < m.vertex_count(); ++v) {
    const double z = m.positions()[v].z();
    if (std::abs(z) < 1e-12) CHECK(f.rho[v] == 0.0);
    if (z > 1e-12) CHECK(f.rho[v] > 0.0);
    if (z < -1e-12) CHECK(f.rho[v] < 0.0);
  }
  Partition one = canonical_partition(m);
  std::fill(one.labels.begin(), one.labels.end(), Side::A);
  CHECK_THROWS_AS((void)signed_distance(m, one), std::invalid_argument);
}

TEST_CASE("torus tube volume is exactly 4 t L") {
  const int n = 32;
  const double h = 1.0 / n;
  const SurfaceMesh t = generate_flat_torus(n, n, 1.0, 1.0);
  const SignedDistanceField f = signed_distance(t, canonical_partition(t));
  for (int k = 1; k <= 8; ++k) {
    const double r = k * h;
    const TubeSet s = tube_set(t, f, r);
    CHECK(s.volume == doctest::Approx(4.0 * r).epsilon(1e-12));
    CHECK(s.vertices.size() == static_cast<std::size_t>(std::min(2 * (2 * k + 1), n) * n));
    CHECK(s.faces.size() == static_cast<std::size_t>(2 * 2 * k * 2 * n));
  }
  CHECK(tube_set(t, f, 0.0).volume == 0.0);
}

TEST_CASE("torus profile") {
  const SurfaceMesh t = generate_flat_torus(32, 32, 1.0, 1.0);
  const SignedDistanceField f = signed_distance(t, canonical_partition(t));
  for (TubeSide side : {TubeSide::positive, TubeSide::negative}) {
    const TubeProfile p = level_profile(t, f, 8, side);
    CHECK(p.f0() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.side_volume == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.edges.size() == 9);
    CHECK(p.edges.back() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.cumulative.back() == doctest::Approx(0.5).epsilon(1e-12));
    // Linear growth: V(0, a) = 2 a.
    for (std::size_t i = 0; i < p.edges.size(); ++i)
      CHECK(p.cumulative[i] == doctest::Approx(2.0 * p.edges[i]).scale(1e-12));
    for (std::size_t i = 1; i < p.f.size(); ++i) CHECK(p.f[i] == doctest::Approx(2.0).epsilon(1e-12));
    const TubeCheck c = tube_growth_check(p, psi_upper_bound({2, 0.0, 0.0}, RhoSide::nonnegative));
    CHECK(c.limit_form);
    CHECK(c.passed);
    CHECK(c.worst_margin >= -1e-12);
  }
  std::ostringstream csv;
  level_profile(t, f, 4, TubeSide::positive).write_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("a,f,V\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK_THROWS_AS((void)level_profile(t, f, 3, TubeSide::positive), std::invalid_argument);
}

TEST_CASE("growth check on synthetic profiles") {
  // V grows like f0 t: fine in the limit form, fails when it doubles.
  const TubeProfile ok = synthetic(1.0, 0.1, {0.0, 0.1, 0.2, 0.3, 0.4});
  const TubeCheck a = tube_growth_check(ok, 0.0);
  CHECK(a.limit_form);
  CHECK(a.passed);
  CHECK(a.slack == doctest::Approx(0.2));
  const TubeProfile fast = synthetic(1.0, 0.1, {0.0, 0.2, 0.45, 0.7, 0.95});
  const TubeCheck b = tube_growth_check(fast, 0.0);
  CHECK_FALSE(b.passed);
  CHECK(b.worst_t == doctest::Approx(0.4));
  CHECK(b.worst_margin == doctest::Approx(0.4 - 0.95));
  CHECK(b.worst_margin < -b.slack);

  // Exponential form: allowed V = f0 e^{C t} / C.
  const double C = 2.0;
  const TubeCheck e = tube_growth_check(ok, C);
  CHECK_FALSE(e.limit_form);
  CHECK(e.passed);
  double margin = 1e300;
  for (std::size_t i = 1; i < ok.edges.size(); ++i)
    margin = std::min(margin, std::exp(C * ok.edges[i]) / C - ok.cumulative[i]);
  CHECK(e.worst_margin == doctest::Approx(margin));
}

TEST_CASE("sphere profile and bands") {
  const SurfaceMesh m = generate_icosphere(4);
  const SignedDistanceField f = signed_distance(m, canonical_partition(m));
  const TubeProfile p = level_profile(m, f, 32, TubeSide::positive);
  CHECK(std::abs(p.f0() - 2.0 * pi) <= 0.01 * 2.0 * pi);
  CHECK(p.side_volume == doctest::Approx(2.0 * pi).epsilon(0.005));
  CHECK(tube_growth_check(p, psi_upper_bound({2, 1.0, 0.0}, RhoSide::nonnegative)).passed);

  // Graph distance overshoots by at most 2/sqrt 3 and whole faces are
  // counted, so the band lies between these two shells.
  const auto lengths = m.edge_lengths();
  const double ell = *std::max_element(lengths.begin(), lengths.end());
  for (double t : {0.1, 0.3, 0.6, 1.0}) {
    const double v = tube_set(m, f, t).volume;
    CHECK(v <= 4.0 * pi * std::sin(t));
    CHECK(v >= 4.0 * pi * std::sin(std::max(0.0, t * std::sqrt(3.0) / 2.0 - ell)));
  }
}

TEST_CASE("boundary ratio bound") {
  const BoundaryRatioReport disk = boundary_ratio_bound(generate_disk(16));
  CHECK(disk.C0 == doctest::Approx(2.0 * pi).epsilon(1e-12));
  CHECK(disk.boundary_length == doctest::Approx(2.0 * pi).epsilon(0.01));
  CHECK(disk.area == doctest::Approx(pi).epsilon(0.01));
  CHECK(disk.ratio == doctest::Approx(disk.boundary_length / disk.area).epsilon(1e-14));
  CHECK(disk.bound == doctest::Approx(disk.C0 * std::exp(-disk.C0 * disk.diameter)).epsilon(1e-14));
  CHECK(disk.passed);
  CHECK(disk.min_kappa == doctest::Approx(1.0).epsilon(1e-3));

  double prev = 1e300;
  for (int rings : {8, 16, 32}) {
    const BoundaryRatioReport cap = boundary_ratio_bound(generate_spherical_cap(pi / 2.0, rings));
    CHECK(cap.C0 < prev);
    CHECK(cap.passed);
    CHECK(cap.ratio == doctest::Approx(1.0).epsilon(0.01));
    prev = cap.C0;
  }
  CHECK(prev < 0.2);

  // Concave inner circle contributes nothing to C0.
  const BoundaryRatioReport ann = boundary_ratio_bound(generate_annulus(0.4, 16));
  CHECK(ann.C0 == doctest::Approx(2.0 * pi).epsilon(1e-12));
  CHECK(ann.min_kappa == doctest::Approx(-2.5).epsilon(0.01));
  CHECK(ann.passed);

  const BoundaryRatioReport curved = boundary_ratio_bound(generate_spherical_cap(pi / 2.0, 16), 4.0, 2);
  CHECK(curved.C0 == doctest::Approx(2.0 * curved.boundary_length).epsilon(1e-12));

  CHECK_THROWS_AS((void)boundary_ratio_bound(generate_icosphere(1)), std::invalid_argument);
}

TEST_CASE("boundary curvature is zero inside") {
  const SurfaceMesh d = generate_disk(6);
  const auto k = boundary_geodesic_curvature(d);
  REQUIRE(k.size() == d.vertex_count());
  std::size_t on_boundary = 0;
  for (double x : k) on_boundary += x != 0.0;
  CHECK(on_boundary > 0);
  CHECK(on_boundary < d.vertex_count());
}
