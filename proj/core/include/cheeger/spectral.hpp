#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cheeger/laplacian.hpp"

namespace cheeger {

enum class EigenMethod { automatic, dense, iterative };

struct SpectralOptions {
  EigenMethod method = EigenMethod::automatic;
  std::size_t dense_threshold = 500;  ///< automatic: dense below this many vertices
  std::uint64_t seed = 0;             ///< Lanczos start vector
  double tolerance = 1e-8;            ///< ||L v - lambda M v|| <= tolerance ||M v||
  int krylov_dimension = 60;
  int max_restarts = 60;
};

/// First nonzero eigenpair of L v = lambda M v. The eigenvector is
/// M-normalized, M-orthogonal to constants, and its largest-magnitude entry
/// is positive.
struct SpectralResult {
  double lambda1 = 0.0;
  Eigen::VectorXd eigenvector;
  double residual = 0.0;  ///< ||L v - lambda M v|| / ||M v||
  std::string method;     ///< "dense" or "lanczos-shift-invert"
  int iterations = 0;     ///< Lanczos steps (0 for dense)
};

class SpectralError : public std::runtime_error {
 public:
  SpectralError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  [[nodiscard]] double residual() const { return residual_; }

 private:
  double residual_;
};

[[nodiscard]] SpectralResult lambda1(const SparseMatrix& stiffness, const Eigen::VectorXd& mass,
                                     const SpectralOptions& options = {});
[[nodiscard]] SpectralResult lambda1(const LaplaceOperator& op, const SpectralOptions& options = {});

/// The `count` smallest nonzero eigenpairs in ascending order; vectors are
/// mutually M-orthonormal.
[[nodiscard]] std::vector<SpectralResult> lowest_eigenpairs(const LaplaceOperator& op, int count,
                                                            const SpectralOptions& options = {});

/// <g, L g> / <g, M g> with g = f - mean_M(f). Throws std::domain_error when
/// the M-variance of f is at most 1e-14 <f, M f>.
[[nodiscard]] double rayleigh_quotient(const LaplaceOperator& op, const Eigen::VectorXd& f);

}  // namespace cheeger
