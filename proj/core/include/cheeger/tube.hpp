#pragma once

#include <iosfwd>
#include <vector>

#include "cheeger/partition.hpp"
#include "cheeger/surface_mesh.hpp"

namespace cheeger {

/// Signed distance to the interface of a face partition: positive on side A,
/// negative on side B, zero on interface vertices.
struct SignedDistanceField {
  std::vector<double> rho;
  std::vector<Index> seeds;  ///< interface vertices, ascending
  Partition partition;
};

/// Throws std::invalid_argument when the partition has no interface.
[[nodiscard]] SignedDistanceField signed_distance(const SurfaceMesh& mesh, const Partition& partition);

struct TubeSet {
  std::vector<Index> vertices;  ///< |rho| <= t, ascending
  std::vector<Index> faces;     ///< all corners inside, ascending
  double volume = 0.0;
};

[[nodiscard]] TubeSet tube_set(const SurfaceMesh& mesh, const SignedDistanceField& field, double t);

enum class TubeSide { positive, negative };

/// Volume profile of one side. A face of that side is binned by the largest
/// |rho| of its corners; bins are uniform on [0, max |rho|].
struct TubeProfile {
  std::vector<double> edges;       ///< a_0 = 0 < a_1 < ... < a_B
  std::vector<double> bin_volume;  ///< V(a_i, a_{i+1}), size B
  std::vector<double> cumulative;  ///< V(0, a_i), size B + 1
  std::vector<double> f;           ///< level measure estimate at a_i, size B + 1
  double bin_width = 0.0;
  double side_volume = 0.0;

  [[nodiscard]] double f0() const { return f.front(); }
  /// CSV with columns a, f, V (V(0, a)).
  void write_csv(std::ostream& out) const;
};

/// f(0) is Vol(Sigma) summed over the interface edges; other f(a_i) are
/// centered differences of V(0, .) (one-sided at the last edge). Throws for
/// fewer than 4 bins or an empty side.
[[nodiscard]] TubeProfile level_profile(const SurfaceMesh& mesh, const SignedDistanceField& field, int bins,
                                        TubeSide side);

/// Checks f(0) / V(0, t) >= C e^{-C t} on every bin edge t > 0, in the
/// volume form V(0, t) <= f(0) / (C e^{-C t}) + slack with slack
/// = 2 bin_width f(0). C <= zero_tolerance switches to the limit form
/// V(0, t) <= f(0) t.
struct TubeCheck {
  double C = 0.0;
  bool limit_form = false;
  double slack = 0.0;
  double worst_margin = 0.0;  ///< min over t of allowed volume - V(0, t)
  double worst_t = 0.0;
  double worst_ratio_margin = 0.0;  ///< min of f(0)/V(0,t) - bound
  bool passed = false;
};

[[nodiscard]] TubeCheck tube_growth_check(const TubeProfile& profile, double C, double zero_tolerance = 1e-12);

/// Boundary-ratio bound for a mesh with boundary.
struct BoundaryRatioReport {
  double boundary_length = 0.0;
  double area = 0.0;
  double ratio = 0.0;     ///< boundary_length / area
  double C0 = 0.0;        ///< sum of max(kappa_g, (n-1) sqrt K) times dual length
  double diameter = 0.0;  ///< largest Dijkstra distance
  double bound = 0.0;     ///< C0 e^{-C0 D}, or 1 / D in the limit form
  bool limit_form = false;
  double min_kappa = 0.0;
  double max_kappa = 0.0;
  bool passed = false;
};

/// kappa_g(v) = (pi - angle sum at v) / dual length, the dual length being
/// half the two incident boundary edges. C0 <= zero_tolerance * boundary
/// length selects the limit form 1 / D. Throws for closed meshes.
[[nodiscard]] BoundaryRatioReport boundary_ratio_bound(const SurfaceMesh& mesh, double K = 0.0, int n = 2,
                                                       double zero_tolerance = 1e-9);

/// Per-vertex geodesic curvature of the boundary (0 at interior vertices).
[[nodiscard]] std::vector<double> boundary_geodesic_curvature(const SurfaceMesh& mesh);

}  // namespace cheeger
