#pragma once

#include <cstdint>
#include <vector>

#include "cheeger/ball.hpp"
#include "cheeger/partition.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/surface_mesh.hpp"

namespace cheeger {

/// Vol(Sigma ∩ B_x(3r)) r e^{3(n-1) sqrt(K) r} / min(Vol(A ∩ B_x(r)), Vol(B ∩ B_x(r))).
/// Returns +infinity when either side misses B_x(r). Throws for r <= 0.
/// The probe must carry the partition.
[[nodiscard]] double local_isoperimetric_ratio(BallProbe& probe, Index x, double r, double K = 0.0, int n = 2);
[[nodiscard]] double local_isoperimetric_ratio(const SurfaceMesh& mesh, const Partition& partition, Index x, double r,
                                               double K = 0.0, int n = 2);

enum class TildeClass : std::uint8_t { sigma, a, b };

/// Vertex classification by the balance g(x) = Vol(A ∩ B_x(r)) - Vol(B ∩ B_x(r)).
///
/// sigma: |g| <= 1e-12 Vol(B_x(r)), or x is the endpoint of an edge across
///        which g changes sign with |g(x)| <= |g| at the other end;
/// a:     g > 0 and not sigma;
/// b:     g < 0 and not sigma.
struct TildeDecomposition {
  double radius = 0.0;
  std::vector<TildeClass> classes;
  std::vector<double> balance;  ///< g(x)
  std::vector<double> ball_volume;

  [[nodiscard]] std::size_t count(TildeClass c) const;
};

[[nodiscard]] TildeDecomposition classify_tilde_sets(const SurfaceMesh& mesh, const Partition& partition, double r);

/// Greedy r-net: vertices are scanned sigma first, then b, then a (ascending
/// id within a class) and become centers when at distance >= r from every
/// earlier center.
struct CoverResult {
  std::vector<Index> centers;
  std::size_t s = 0;  ///< centers in sigma
  std::size_t m = 0;  ///< centers in sigma or b
  std::size_t k = 0;  ///< all centers
  int multiplicity = 0;  ///< max number of 3r-balls containing one vertex
};

[[nodiscard]] CoverResult gromov_cover(const SurfaceMesh& mesh, double r, const TildeDecomposition& tilde);

/// Piecewise test function built from the tilde sets, with rho the distance
/// to sigma:
///   a, rho >= r:  Vol(b)         a, rho < r:  (rho / r) Vol(b)
///   b, rho >= r: -Vol(a)         b, rho < r: -(rho / r) Vol(a)
/// and 0 on sigma. Volumes are lumped vertex areas.
struct BuserFunction {
  std::vector<double> values;
  std::vector<double> rho;
  double vol_a = 0.0;     ///< Vol(a-tilde)
  double vol_b = 0.0;     ///< Vol(b-tilde)
  double vol_tube = 0.0;  ///< Vol of {rho <= r}
  double mean = 0.0;      ///< integral of f
};

/// Throws std::domain_error when sigma is empty, std::invalid_argument when a
/// or b is empty.
[[nodiscard]] BuserFunction buser_test_function(const SurfaceMesh& mesh, const TildeDecomposition& tilde, double r);

struct BuserOptions {
  double K = 0.0;
  double epsilon = 0.1;
  SpectralOptions spectral;
};

struct BuserReport {
  double h = 0.0;        ///< ratio of the supplied partition
  double r = 0.0;
  double lambda1 = 0.0;
  double rayleigh = 0.0; ///< Rayleigh quotient of the test function
  double c_emp = 0.0;    ///< rayleigh * r / h
  std::size_t sigma_count = 0;
  std::size_t a_count = 0;
  std::size_t b_count = 0;
  CoverResult cover;
  double mean_abs = 0.0;   ///< |integral of f|
  double mean_bound = 0.0; ///< Vol(tube) Vol(M)
  bool variational_ok = false;  ///< lambda1 <= rayleigh (1 + 1e-9)
  bool resolved = false;        ///< r >= 2 * longest edge
};

/// r = epsilon min(K^{-1/2}, 1/h) (K = 0: epsilon / h).
[[nodiscard]] BuserReport verify_buser(const SurfaceMesh& mesh, const Partition& partition,
                                       const BuserOptions& options = {});
/// Same, reusing an already computed first eigenvalue.
[[nodiscard]] BuserReport verify_buser(const SurfaceMesh& mesh, const Partition& partition, double lambda1,
                                       const BuserOptions& options);

/// (C_n / D) e^{-3 (n-1) s D} with s = sqrt(K), or s = 1 when
/// include_sqrt_k is false.
[[nodiscard]] double diameter_lower_bound(int n, double K, double D, double C_n, bool include_sqrt_k = true);

}  // namespace cheeger
