#include "cheeger/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cheeger {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_flat(const ComparisonParams& p) { return p.K < kFlatCurvatureCutoff; }

double riccati_rhs(double psi, double dim_minus_one, double K) {
  return -psi * psi / dim_minus_one + dim_minus_one * K;
}

}  // namespace

void ComparisonParams::validate() const {
  if (n < 2) throw std::invalid_argument("comparison params: n must be >= 2, got " + std::to_string(n));
  if (!(K >= 0.0) || !std::isfinite(K))
    throw std::invalid_argument("comparison params: K must be finite and >= 0");
  if (!std::isfinite(H)) throw std::invalid_argument("comparison params: H must be finite");
}

double ComparisonParams::equilibrium() const {
  return static_cast<double>(n - 1) * std::sqrt(K);
}

double max_existence_time(const ComparisonParams& params) {
  params.validate();
  const double m = params.n - 1;
  if (params.H >= 0.0) return kInf;
  if (is_flat(params)) return m / (-params.H);
  const double a = params.equilibrium();
  // For -H <= a the solution stays finite and tends to +-a.
  if (a >= -params.H) return kInf;
  return std::atanh(a / (-params.H)) / std::sqrt(params.K);
}

double psi_closed_form(const ComparisonParams& params, double t) {
  params.validate();
  if (!(t >= 0.0)) throw std::domain_error("psi_closed_form: t must be >= 0");
  const double T = max_existence_time(params);
  if (t >= T) throw std::domain_error("psi_closed_form: t is outside the existence interval");
  if (t == 0.0) return params.H;

  const double m = params.n - 1;
  const double H = params.H;
  if (is_flat(params)) {
    const double denom = m + t * H;
    if (denom <= 0.0) throw std::domain_error("psi_closed_form: t is outside the existence interval");
    return m * H / denom;
  }

  // a (a tanh + H) / (a + H tanh), rewritten around the equilibrium a with
  // e = exp(-2 sqrt(K) t) so that large t neither overflows nor cancels:
  //   psi = a + 2 a (H - a) e / (a (1 + e) + H (1 - e)).
  const double a = params.equilibrium();
  const double e = std::exp(-2.0 * std::sqrt(params.K) * t);
  const double denom = a * (1.0 + e) + H * (1.0 - e);
  if (!(denom > 0.0)) throw std::domain_error("psi_closed_form: denominator vanished (t >= T)");
  return a + 2.0 * a * (H - a) * e / denom;
}

double psi_upper_bound(const ComparisonParams& params, RhoSide side) {
  params.validate();
  const double a = params.equilibrium();
  if (side == RhoSide::nonnegative) return params.H <= 0.0 ? a : std::max(params.H, a);
  return params.H >= 0.0 ? a : std::max(-params.H, a);
}

RiccatiTrajectory integrate_riccati(const ComparisonParams& params, double t_end, double step,
                                    const RiccatiOptions& options) {
  params.validate();
  if (!(step > 0.0)) throw std::invalid_argument("integrate_riccati: step must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("integrate_riccati: t_end must be >= 0");
  const std::size_t stride = std::max<std::size_t>(1, options.record_stride);

  const double m = params.n - 1;
  const double K = params.K;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));

  RiccatiTrajectory out;
  out.step = step;
  out.t.reserve(steps / stride + 2);
  out.psi.reserve(steps / stride + 2);
  out.t.push_back(0.0);
  out.psi.push_back(params.H);

  double psi = params.H;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * step;
    const double t1 = std::min(t_end, static_cast<double>(k + 1) * step);
    const double h = t1 - t0;
    const double k1 = riccati_rhs(psi, m, K);
    const double k2 = riccati_rhs(psi + 0.5 * h * k1, m, K);
    const double k3 = riccati_rhs(psi + 0.5 * h * k2, m, K);
    const double k4 = riccati_rhs(psi + h * k3, m, K);
    const double next = psi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(next) || std::abs(next) >= options.blowup_cap) {
      out.blew_up = true;
      out.last_valid_time = t0;
      if (out.t.back() != t0) {
        out.t.push_back(t0);
        out.psi.push_back(psi);
      }
      return out;
    }
    psi = next;
    if ((k + 1) % stride == 0 || k + 1 == steps) {
      out.t.push_back(t1);
      out.psi.push_back(psi);
    }
  }
  out.last_valid_time = steps == 0 ? 0.0 : out.t.back();
  return out;
}

}  // namespace cheeger
