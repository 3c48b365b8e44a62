#include "cheeger/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace cheeger {

namespace {

// All iterations run on the symmetric form D = S^-1 L S^-1 with S = sqrt(M),
// whose eigenvectors are u = S v. The kernel of D is spanned by S 1.
struct Scaled {
  Eigen::VectorXd sqrt_m;
  Eigen::VectorXd inv_sqrt_m;
  Eigen::VectorXd kernel;  // unit vector S 1 / |S 1|
};

Scaled make_scaled(const Eigen::VectorXd& mass) {
  if (mass.size() < 2) throw std::invalid_argument("spectral: need at least two vertices");
  if (!(mass.minCoeff() > 0.0)) throw std::invalid_argument("spectral: mass must be strictly positive");
  Scaled s;
  s.sqrt_m = mass.cwiseSqrt();
  s.inv_sqrt_m = s.sqrt_m.cwiseInverse();
  s.kernel = s.sqrt_m.normalized();
  return s;
}

void project_out(Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& basis) {
  for (const auto& q : basis) x -= q.dot(x) * q;
}

double residual_norm(const SparseMatrix& L, const Eigen::VectorXd& mass, const Eigen::VectorXd& v, double lambda) {
  const Eigen::VectorXd mv = mass.cwiseProduct(v);
  return (L * v - lambda * mv).norm() / mv.norm();
}

/// Rayleigh value, M-normalization, constant removal and sign convention.
SpectralResult finish(const SparseMatrix& L, const Eigen::VectorXd& mass, Eigen::VectorXd v, std::string method,
                      int iterations) {
  const double total = mass.sum();
  v.array() -= mass.dot(v) / total;
  v /= std::sqrt(v.dot(mass.cwiseProduct(v)));
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;

  SpectralResult out;
  out.lambda1 = std::max(0.0, v.dot(L * v));
  out.residual = residual_norm(L, mass, v, out.lambda1);
  out.eigenvector = std::move(v);
  out.method = std::move(method);
  out.iterations = iterations;
  return out;
}

std::vector<SpectralResult> dense_eigenpairs(const SparseMatrix& L, const Eigen::VectorXd& mass, int count,
                                             const SpectralOptions& options) {
  const Scaled s = make_scaled(mass);
  const Eigen::Index n = mass.size();
  if (count > n - 1) throw std::invalid_argument("spectral: requested more eigenpairs than exist");
  Eigen::MatrixXd D = s.inv_sqrt_m.asDiagonal() * Eigen::MatrixXd(L) * s.inv_sqrt_m.asDiagonal();
  // Lift the constant mode above the spectrum (Gershgorin bound).
  const double lift = 1.0 + 2.0 * D.cwiseAbs().rowwise().sum().maxCoeff();
  D += lift * s.kernel * s.kernel.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(D);
  if (solver.info() != Eigen::Success) throw SpectralError("spectral: dense eigensolver failed", NAN);

  std::vector<SpectralResult> out;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = s.inv_sqrt_m.cwiseProduct(solver.eigenvectors().col(k));
    SpectralResult r = finish(L, mass, std::move(v), "dense", 0);
    if (!(r.residual <= options.tolerance))
      throw SpectralError("spectral: dense residual above tolerance", r.residual);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SpectralResult> lanczos_eigenpairs(const SparseMatrix& L, const Eigen::VectorXd& mass, int count,
                                               const SpectralOptions& options) {
  const Scaled s = make_scaled(mass);
  const Eigen::Index n = mass.size();
  if (count > n - 1) throw std::invalid_argument("spectral: requested more eigenpairs than exist");

  // Shift just below zero so that L - sigma M is positive definite.
  double diag_scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) diag_scale = std::max(diag_scale, L.coeff(i, i) / mass[i]);
  const double sigma = -1e-6 * std::max(diag_scale, 1e-300);
  SparseMatrix shifted = L;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma * mass[i];
  Eigen::SimplicialLDLT<SparseMatrix> factor(shifted);
  if (factor.info() != Eigen::Success) throw SpectralError("spectral: factorization of L - sigma M failed", NAN);

  auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd y = factor.solve(s.sqrt_m.cwiseProduct(x));
    return s.sqrt_m.cwiseProduct(y);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<Eigen::VectorXd> locked{s.kernel};
  std::vector<SpectralResult> out;
  int total_steps = 0;

  const int m_max = static_cast<int>(std::min<Eigen::Index>(options.krylov_dimension, n - 1));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = uniform(rng);
    double best_residual = INFINITY;
    bool converged = false;

    for (int restart = 0; restart <= options.max_restarts && !converged; ++restart) {
      project_out(x, locked);
      x.normalize();
      Eigen::MatrixXd V(n, m_max);
      Eigen::VectorXd alpha(m_max);
      Eigen::VectorXd beta(m_max);
      int m = 0;
      for (int j = 0; j < m_max; ++j) {
        V.col(j) = x;
        Eigen::VectorXd w = apply(x);
        project_out(w, locked);
        alpha[j] = x.dot(w);
        w -= alpha[j] * x;
        if (j > 0) w -= beta[j - 1] * V.col(j - 1);
        for (int pass = 0; pass < 2; ++pass) {
          w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
          project_out(w, locked);
        }
        beta[j] = w.norm();
        m = j + 1;
        ++total_steps;
        if (beta[j] <= 1e-14 * std::abs(alpha[j])) break;
        x = w / beta[j];
      }

      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int j = 0; j < m; ++j) {
        T(j, j) = alpha[j];
        if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(T);
      Eigen::VectorXd y = V.leftCols(m) * ritz.eigenvectors().col(m - 1);
      project_out(y, locked);
      y.normalize();

      Eigen::VectorXd v = s.inv_sqrt_m.cwiseProduct(y);
      SpectralResult r = finish(L, mass, v, "lanczos-shift-invert", total_steps);
      best_residual = std::min(best_residual, r.residual);
      if (r.residual <= options.tolerance) {
        locked.push_back(s.sqrt_m.cwiseProduct(r.eigenvector).normalized());
        out.push_back(std::move(r));
        converged = true;
      } else {
        x = y;
      }
    }
    if (!converged)
      throw SpectralError("spectral: Lanczos did not converge (residual " + std::to_string(best_residual) + ")",
                          best_residual);
  }
  return out;
}

}  // namespace

std::vector<SpectralResult> lowest_eigenpairs(const LaplaceOperator& op, int count, const SpectralOptions& options) {
  if (count < 1) throw std::invalid_argument("spectral: count must be >= 1");
  if (op.stiffness.rows() != op.mass.size() || op.stiffness.cols() != op.mass.size())
    throw std::invalid_argument("spectral: stiffness and mass sizes differ");
  bool dense = options.method == EigenMethod::dense;
  if (options.method == EigenMethod::automatic)
    dense = static_cast<std::size_t>(op.mass.size()) < options.dense_threshold;
  return dense ? dense_eigenpairs(op.stiffness, op.mass, count, options)
               : lanczos_eigenpairs(op.stiffness, op.mass, count, options);
}

SpectralResult lambda1(const LaplaceOperator& op, const SpectralOptions& options) {
  return std::move(lowest_eigenpairs(op, 1, options).front());
}

SpectralResult lambda1(const SparseMatrix& stiffness, const Eigen::VectorXd& mass, const SpectralOptions& options) {
  return lambda1(LaplaceOperator{stiffness, mass}, options);
}

double rayleigh_quotient(const LaplaceOperator& op, const Eigen::VectorXd& f) {
  if (f.size() != op.mass.size()) throw std::invalid_argument("rayleigh quotient: size mismatch");
  const double mean = op.mass.dot(f) / op.mass.sum();
  const Eigen::VectorXd g = f.array() - mean;
  const double variance = g.dot(op.mass.cwiseProduct(g));
  const double scale = f.dot(op.mass.cwiseProduct(f));
  if (!(variance > 1e-14 * scale)) throw std::domain_error("rayleigh quotient: f is constant");
  return g.dot(op.stiffness * g) / variance;
}

}  // namespace cheeger
