#pragma once

#include <cstddef>
#include <vector>

namespace cheeger {

/// Parameters of the scalar comparison equation
///
///     psi' + psi^2 / (n - 1) - (n - 1) K = 0,   psi(0) = H,
///
/// which bounds the mean curvature of the level sets of the signed distance
/// to a hypersurface of mean curvature H in a manifold with Ric >= -(n-1)K.
struct ComparisonParams {
  int n = 2;       ///< dimension, n >= 2
  double K = 0.0;  ///< curvature bound, K >= 0 (1/length^2)
  double H = 0.0;  ///< initial mean curvature (1/length)

  /// Throws std::invalid_argument unless n >= 2, K >= 0 and H is finite.
  void validate() const;

  /// (n - 1) sqrt(K), the stationary value of psi.
  [[nodiscard]] double equilibrium() const;
};

/// Below this K the flat closed form is used.
inline constexpr double kFlatCurvatureCutoff = 1e-14;

/// Closed-form solution psi_{K,H}(t). Throws std::domain_error when t < 0 or
/// t >= max_existence_time(params).
[[nodiscard]] double psi_closed_form(const ComparisonParams& params, double t);

/// First blow-up time of psi_{K,H}; +infinity when the solution exists for
/// all t >= 0.
[[nodiscard]] double max_existence_time(const ComparisonParams& params);

enum class RhoSide { nonnegative, nonpositive };

/// Envelope of Delta rho on one side of the hypersurface. On the
/// nonpositive side the value bounds -Delta rho.
[[nodiscard]] double psi_upper_bound(const ComparisonParams& params, RhoSide side);

struct RiccatiOptions {
  double blowup_cap = 1e12;      ///< |psi| at or above this counts as blow-up
  std::size_t record_stride = 1; ///< keep every k-th step in the trajectory
};

struct RiccatiTrajectory {
  std::vector<double> t;
  std::vector<double> psi;
  bool blew_up = false;
  double last_valid_time = 0.0;  ///< last time with |psi| < cap
  double step = 0.0;
};

/// Fixed-step classical RK4 integration of the comparison equation from
/// psi(0) = H up to t_end. Blow-up stops the integration and is reported in
/// the result; it is not an error.
[[nodiscard]] RiccatiTrajectory integrate_riccati(const ComparisonParams& params,
                                                  double t_end, double step,
                                                  const RiccatiOptions& options = {});

}  // namespace cheeger
