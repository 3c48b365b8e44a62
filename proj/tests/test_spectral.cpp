#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "cheeger/generators.hpp"
#include "cheeger/laplacian.hpp"
#include "cheeger/spectral.hpp"

using namespace cheeger;
constexpr double pi = std::numbers::pi;

namespace {

WeightedGraph cycle(std::size_t n) {
  std::vector<std::pair<Index, Index>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(static_cast<Index>(i), static_cast<Index>((i + 1) % n));
  return WeightedGraph::unit(n, e);
}

WeightedGraph path(std::size_t n) {
  std::vector<std::pair<Index, Index>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<Index>(i), static_cast<Index>(i + 1));
  return WeightedGraph::unit(n, e);
}

SpectralOptions with(EigenMethod m, std::uint64_t seed = 0) {
  SpectralOptions o;
  o.method = m;
  o.seed = seed;
  return o;
}

// Discrete eigenvalue of the square-celled torus grid, whose diagonal
// cotangent weights vanish: a five-point stencil over mass h^2.
double torus_grid_eigenvalue(int n, double L, int k, int l) {
  const double h = L / n;
  const double sk = std::sin(pi * k / n), sl = std::sin(pi * l / n);
  return 4.0 / (h * h) * (sk * sk + sl * sl);
}

void check_pair(const LaplaceOperator& op, const SpectralResult& r, double tol) {
  const Eigen::VectorXd& v = r.eigenvector;
  const Eigen::VectorXd Lv = op.stiffness * v;
  const Eigen::VectorXd Mv = op.mass.cwiseProduct(v);
  CHECK((Lv - r.lambda1 * Mv).norm() <= tol * Mv.norm());
  CHECK(v.dot(Mv) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(op.mass.dot(v)) <= 1e-9 * std::sqrt(op.mass.sum()));
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  CHECK(v[arg] > 0.0);
}

}  // namespace

TEST_CASE("two vertices") {
  const LaplaceOperator op = laplacian(WeightedGraph::unit(2, {{0, 1}}));
  for (auto m : {EigenMethod::dense, EigenMethod::iterative}) {
    const SpectralResult r = lambda1(op, with(m));
    CHECK(r.lambda1 == doctest::Approx(2.0).epsilon(1e-12));
    check_pair(op, r, 1e-8);
  }
}

TEST_CASE("four-cycle spectrum") {
  const LaplaceOperator op = laplacian(cycle(4));
  const auto pairs = lowest_eigenpairs(op, 3, with(EigenMethod::dense));
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].lambda1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pairs[1].lambda1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pairs[2].lambda1 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(pairs[0].eigenvector.dot(op.mass.cwiseProduct(pairs[1].eigenvector))) <= 1e-10);
  CHECK_THROWS_AS((void)lowest_eigenpairs(op, 4, with(EigenMethod::dense)), std::invalid_argument);
}

TEST_CASE("cycle and path spectra") {
  for (std::size_t n : {5u, 12u, 31u}) {
    const auto c = lowest_eigenpairs(laplacian(cycle(n)), 4, with(EigenMethod::dense));
    const auto p = lowest_eigenpairs(laplacian(path(n)), 4, with(EigenMethod::dense));
    const double want_c[] = {2 - 2 * std::cos(2 * pi / n), 2 - 2 * std::cos(2 * pi / n),
                             2 - 2 * std::cos(4 * pi / n), 2 - 2 * std::cos(4 * pi / n)};
    for (int k = 0; k < 4; ++k) {
      CHECK(c[k].lambda1 == doctest::Approx(want_c[k]).epsilon(1e-10));
      CHECK(p[k].lambda1 == doctest::Approx(2 - 2 * std::cos(pi * (k + 1) / n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("flat torus grid eigenvalue, dense and lanczos") {
  const int n = 24;
  const LaplaceOperator op = laplacian(generate_flat_torus(n, n, 1.0, 1.0));
  const double want = torus_grid_eigenvalue(n, 1.0, 1, 0);
  const SpectralResult d = lambda1(op, with(EigenMethod::dense));
  const SpectralResult l = lambda1(op, with(EigenMethod::iterative));
  CHECK(d.method == "dense");
  CHECK(l.method == "lanczos-shift-invert");
  CHECK(d.lambda1 == doctest::Approx(want).epsilon(1e-10));
  CHECK(l.lambda1 == doctest::Approx(want).epsilon(1e-8));
  check_pair(op, d, 1e-8);
  check_pair(op, l, 1e-7);
  // Fourfold multiplicity: (1,0), (-1,0), (0,1), (0,-1); then (1,1) times four.
  const auto pairs = lowest_eigenpairs(op, 8, with(EigenMethod::dense));
  for (int k = 0; k < 4; ++k) CHECK(pairs[k].lambda1 == doctest::Approx(want).epsilon(1e-10));
  for (int k = 4; k < 8; ++k) CHECK(pairs[k].lambda1 == doctest::Approx(torus_grid_eigenvalue(n, 1.0, 1, 1)).epsilon(1e-10));
}

TEST_CASE("rectangular torus picks the long direction") {
  const LaplaceOperator op = laplacian(generate_flat_torus(16, 24, 1.0, 1.5));
  const double h = 1.0 / 16;
  const double want = 4.0 / (h * h) * std::pow(std::sin(pi / 24), 2);
  CHECK(lambda1(op, with(EigenMethod::dense)).lambda1 == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("dense and lanczos agree on mid-sized meshes") {
  for (const SurfaceMesh& m : {generate_icosphere(3), generate_dumbbell(0.4, 1), generate_flat_torus(20, 25, 1.0, 1.0)}) {
    CAPTURE(m.vertex_count());
    const LaplaceOperator op = laplacian(m);
    const SpectralResult d = lambda1(op, with(EigenMethod::dense));
    const SpectralResult l = lambda1(op, with(EigenMethod::iterative));
    CHECK(std::abs(d.lambda1 - l.lambda1) <= 1e-7 * d.lambda1);
    CHECK(l.residual <= 1e-8);
    CHECK(l.iterations > 0);
    CHECK(d.iterations == 0);
    check_pair(op, l, 1e-7);
  }
}

TEST_CASE("automatic switches on vertex count") {
  const LaplaceOperator small = laplacian(generate_icosphere(2));
  const LaplaceOperator large = laplacian(generate_icosphere(3));
  CHECK(lambda1(small).method == "dense");
  CHECK(lambda1(large).method == "lanczos-shift-invert");
}

TEST_CASE("icosphere first eigenvalue approaches 2") {
  const SpectralResult r = lambda1(laplacian(generate_icosphere(4)));
  CHECK(std::abs(r.lambda1 - 2.0) <= 0.02 * 2.0);
}

TEST_CASE("rayleigh quotient") {
  const LaplaceOperator c4 = laplacian(cycle(4));
  Eigen::VectorXd ind(4);
  ind << 1, 1, 0, 0;
  CHECK(rayleigh_quotient(c4, ind) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rayleigh_quotient(c4, 3.0 * ind + Eigen::VectorXd::Constant(4, 5.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)rayleigh_quotient(c4, Eigen::VectorXd::Constant(4, 2.0)), std::domain_error);
  CHECK_THROWS_AS((void)rayleigh_quotient(c4, Eigen::VectorXd::Ones(3)), std::invalid_argument);

  const LaplaceOperator sph = laplacian(generate_icosphere(2));
  const SpectralResult r = lambda1(sph);
  CHECK(rayleigh_quotient(sph, r.eigenvector) == doctest::Approx(r.lambda1).epsilon(1e-10));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const LaplaceOperator op = laplacian(generate_random_graph(5 + s % 20, 0.3, s));
    const double l1 = lambda1(op).lambda1;
    Eigen::VectorXd f(op.mass.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = g(rng);
    CHECK(rayleigh_quotient(op, f) >= l1 * (1.0 - 1e-12));
  }
}

TEST_CASE("lanczos is deterministic for a seed") {
  const LaplaceOperator op = laplacian(generate_dumbbell(0.3, 1));
  const SpectralResult a = lambda1(op, with(EigenMethod::iterative, 9));
  const SpectralResult b = lambda1(op, with(EigenMethod::iterative, 9));
  CHECK(a.lambda1 == b.lambda1);
  CHECK(a.eigenvector == b.eigenvector);
  CHECK(a.iterations == b.iterations);
  const SpectralResult c = lambda1(op, with(EigenMethod::iterative, 10));
  CHECK(c.lambda1 == doctest::Approx(a.lambda1).epsilon(1e-8));
}

TEST_CASE("input validation and convergence failure") {
  const LaplaceOperator op = laplacian(generate_flat_torus(24, 24, 1.0, 1.0));
  CHECK_THROWS_AS((void)lambda1(op.stiffness, Eigen::VectorXd::Ones(3)), std::invalid_argument);
  Eigen::VectorXd bad = op.mass;
  bad[0] = 0.0;
  CHECK_THROWS_AS((void)lambda1(op.stiffness, bad), std::invalid_argument);
  SpectralOptions o = with(EigenMethod::iterative);
  o.krylov_dimension = 3;
  o.max_restarts = 0;
  o.tolerance = 1e-15;
  CHECK_THROWS_AS((void)lambda1(op, o), SpectralError);
}
