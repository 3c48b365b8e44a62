#include "cheeger_lab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "cheeger/buser.hpp"
#include "cheeger/cheeger_cut.hpp"
#include "cheeger/distance.hpp"
#include "cheeger/generators.hpp"
#include "cheeger/laplacian.hpp"
#include "cheeger/riccati.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/tube.hpp"

#ifndef CHEEGER_LAB_VERSION
#define CHEEGER_LAB_VERSION "0.0.0"
#endif

namespace cheeger::lab {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Independent stream per experiment and purpose, so results do not depend
/// on which experiments run or in what order.
std::mt19937_64 make_rng(std::uint64_t seed, const std::string& tag) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tag) h = (h ^ c) * 1099511628211ull;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

Json range(double lo, double hi, const std::string& method) {
  return Json::array({quantity(lo, method), quantity(hi, method)});
}

void check_within(ExperimentResult& res, const std::string& name, double value, double target, double tol,
                  const std::string& method) {
  const bool ok = std::abs(value - target) <= tol;
  res.check(name, ok, quantity(value, method, tol), "in", range(target - tol, target + tol, "analytic"));
}

void check_le(ExperimentResult& res, const std::string& name, double value, double limit, const std::string& method,
              double tol = 0.0) {
  res.check(name, value <= limit, quantity(value, method, tol), "<=", quantity(limit, "limit"));
}

void check_ge(ExperimentResult& res, const std::string& name, double value, double limit, const std::string& method,
              double tol = 0.0) {
  res.check(name, value >= limit, quantity(value, method, tol), ">=", quantity(limit, "limit"));
}

double median(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double longest_edge(const SurfaceMesh& mesh) {
  const auto l = mesh.edge_lengths();
  return *std::max_element(l.begin(), l.end());
}

std::string csv_number(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

// ---------------------------------------------------------------- riccati

void riccati_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const RiccatiConfig& rc = cfg.riccati;
  std::uniform_int_distribution<int> dim(2, 6);
  std::uniform_real_distribution<double> kdist(0.0, 4.0);
  std::uniform_real_distribution<double> hdist(-5.0, 5.0);

  {
    auto t0 = Clock::now();
    auto rng = make_rng(cfg.seed, "riccati/oracle");
    double max_abs = 0.0, max_rel = 0.0;
    Json worst = Json::array();
    std::size_t finite_t = 0, blown = 0, compared = 0;
    for (int c = 0; c < rc.cases; ++c) {
      ComparisonParams p;
      p.n = dim(rng);
      p.K = kdist(rng);
      p.H = hdist(rng);
      const double T = max_existence_time(p);
      if (std::isfinite(T)) ++finite_t;
      const double window = std::isfinite(T) ? T - rc.margin : rc.horizon;
      if (!(window > 0.0)) continue;
      const long N = static_cast<long>(std::floor(window / rc.step + 1e-9));
      const auto traj = integrate_riccati(p, static_cast<double>(N) * rc.step, rc.step);
      if (traj.blew_up) {
        ++blown;
        max_abs = INFINITY;
        continue;
      }
      const long last = static_cast<long>(traj.psi.size()) - 1;
      for (int j = 0; j < rc.samples; ++j) {
        const long idx = std::min(last, static_cast<long>(j) * N / std::max(1, rc.samples - 1));
        const double t = traj.t[idx];
        const double exact = psi_closed_form(p, t);
        const double err = std::abs(traj.psi[idx] - exact);
        const double rel = err / std::max(1.0, std::abs(exact));
        ++compared;
        max_rel = std::max(max_rel, rel);
        if (err > max_abs) {
          max_abs = err;
          worst = Json::array({Json{{"n", count(static_cast<std::size_t>(p.n))}, {"K", quantity(p.K, "sampled")},
                                     {"H", quantity(p.H, "sampled")}, {"t", quantity(t, "rk4 grid")},
                                     {"T", quantity(T, "closed form")}, {"psi", quantity(exact, "closed form")},
                                     {"psi_rk4", quantity(traj.psi[idx], "rk4", rc.tolerance)}}});
        }
      }
    }
    res.add("oracle.cases", count(static_cast<std::size_t>(rc.cases)));
    res.add("oracle.finite_T_cases", count(finite_t));
    res.add("oracle.samples_compared", count(compared));
    res.add("oracle.blown_up", count(blown));
    res.add("oracle.max_abs_error", quantity(max_abs, "rk4 vs closed form", rc.tolerance));
    res.add("oracle.max_rel_error", quantity(max_rel, "rk4 vs closed form, |err|/max(1,|psi|)", rc.tolerance));
    res.tables["oracle_worst_case"] = worst;
    check_le(res, "oracle_abs_error", max_abs, rc.tolerance, "rk4 vs closed form", rc.tolerance);
    res.phase_seconds.emplace_back("oracle", since(t0));
  }

  {
    auto rng = make_rng(cfg.seed, "riccati/constant");
    double closed_dev = 0.0, rk4_dev = 0.0;
    for (int c = 0; c < rc.constant_cases; ++c) {
      ComparisonParams p;
      p.n = dim(rng);
      p.K = c == 0 ? 0.0 : kdist(rng);
      p.H = p.equilibrium();
      for (int j = 0; j <= 1000; ++j) closed_dev = std::max(closed_dev, std::abs(psi_closed_form(p, 0.01 * j) - p.H));
      const auto traj = integrate_riccati(p, 10.0, 1e-3, RiccatiOptions{1e12, 10});
      for (double v : traj.psi) rk4_dev = std::max(rk4_dev, std::abs(v - p.H));
    }
    res.add("constant.closed_form_max_deviation", quantity(closed_dev, "closed form, t in [0,10]", 1e-12));
    res.add("constant.rk4_max_deviation", quantity(rk4_dev, "rk4 step 1e-3, t in [0,10]", 1e-10));
    check_le(res, "constant_closed_form", closed_dev, 1e-12, "closed form", 1e-12);
    check_le(res, "constant_rk4", rk4_dev, 1e-10, "rk4 step 1e-3", 1e-10);
  }

  {
    auto rng = make_rng(cfg.seed, "riccati/blowup");
    double worst = 0.0;
    std::size_t missed = 0;
    for (int c = 0; c < rc.blowup_cases; ++c) {
      ComparisonParams p;
      do {
        p.n = dim(rng);
        p.K = kdist(rng);
      } while (p.equilibrium() + 0.5 >= 5.0);
      p.H = std::uniform_real_distribution<double>(-5.0, -p.equilibrium() - 0.5)(rng);
      const double T = max_existence_time(p);
      const auto traj = integrate_riccati(p, T + 0.01, rc.step, RiccatiOptions{1e12, 1000});
      if (!traj.blew_up) {
        ++missed;
        continue;
      }
      worst = std::max(worst, std::abs(traj.last_valid_time - T));
    }
    if (missed) worst = INFINITY;
    res.add("blowup.cases", count(static_cast<std::size_t>(rc.blowup_cases)));
    res.add("blowup.max_time_error", quantity(worst, "rk4 blow-up (cap 1e12) vs T", 1e-4));
    check_le(res, "blowup_time", worst, 1e-4, "rk4 blow-up vs T", 1e-4);
  }

  {
    auto rng = make_rng(cfg.seed, "riccati/envelope");
    std::size_t violations = 0;
    double worst_excess = -INFINITY;
    for (int c = 0; c < rc.envelope_cases; ++c) {
      ComparisonParams p;
      p.n = dim(rng);
      p.K = kdist(rng);
      p.H = hdist(rng);
      const double T = max_existence_time(p);
      const double tmax = std::isfinite(T) ? T - rc.margin : 10.0;
      const double bound = psi_upper_bound(p, RhoSide::nonnegative);
      for (int j = 0; j < rc.envelope_samples; ++j) {
        const double t = tmax * j / std::max(1, rc.envelope_samples - 1);
        const double excess = psi_closed_form(p, t) - bound;
        worst_excess = std::max(worst_excess, excess);
        if (excess > 1e-12 * std::max(1.0, std::abs(bound))) ++violations;
      }
    }
    res.add("envelope.worst_excess", quantity(worst_excess, "max of psi - envelope over grid", 1e-12));
    res.add("envelope.violations", count(violations));
    res.check("envelope", violations == 0, count(violations), "==", count(0));
  }

  {
    auto rng = make_rng(cfg.seed, "riccati/monotone");
    std::size_t violations = 0;
    for (int c = 0; c < 100; ++c) {
      ComparisonParams p;
      p.n = dim(rng);
      p.H = std::uniform_real_distribution<double>(1e-3, 5.0)(rng);
      double prev = p.H;
      for (int j = 1; j <= 1000; ++j) {
        const double v = psi_closed_form(p, 0.01 * j);
        if (v > prev) ++violations;
        prev = v;
      }
    }
    res.check("monotone_flat_positive_H", violations == 0, count(violations), "==", count(0));
  }

  {
    auto rng = make_rng(cfg.seed, "riccati/equilibrium");
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      ComparisonParams p;
      p.n = dim(rng);
      p.K = std::uniform_real_distribution<double>(0.01, 4.0)(rng);
      const double a = p.equilibrium();
      p.H = std::uniform_real_distribution<double>(-a + 1e-3, 5.0)(rng);
      worst = std::max(worst, std::abs(psi_closed_form(p, 50.0 / std::sqrt(p.K)) - a));
    }
    res.add("equilibrium.max_deviation", quantity(worst, "closed form at t = 50/sqrt(K)", 1e-6));
    check_le(res, "equilibrium", worst, 1e-6, "closed form", 1e-6);
  }

  {
    const ComparisonParams p{2, 1.0, -2.0};
    const auto traj = integrate_riccati(p, 0.25, 1e-5, RiccatiOptions{1e12, 25000});
    res.add("example.psi_closed_form", quantity(psi_closed_form(p, 0.25), "closed form n=2 K=1 H=-2 t=0.25"));
    res.add("example.psi_rk4", quantity(traj.psi.back(), "rk4 step 1e-5", 1e-8));
    res.add("example.T", quantity(max_existence_time(p), "closed form"));
  }
}

// ----------------------------------------------------------- cheeger-bound

void cheeger_bound_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const CheegerBoundConfig& cc = cfg.cheeger_bound;
  auto rng = make_rng(cfg.seed, "cheeger-bound");
  std::uniform_int_distribution<int> size(cc.min_vertices, cc.max_vertices);
  double min_slack = INFINITY, min_gap = INFINITY, max_ratio = 0.0;
  Json rows = Json::array();
  SpectralOptions so;
  so.method = EigenMethod::dense;
  for (int g = 0; g < cc.graphs; ++g) {
    const int n = size(rng);
    const std::uint64_t graph_seed = rng();
    const WeightedGraph graph = generate_random_graph(static_cast<std::size_t>(n), cc.edge_probability, graph_seed);
    const CheegerResult exact = cheeger_exact(graph);
    const SpectralResult eig = lambda1(laplacian(graph), so);
    const double slack = eig.lambda1 - exact.h * exact.h / 4.0;
    const std::vector<double> fiedler(eig.eigenvector.data(), eig.eigenvector.data() + eig.eigenvector.size());
    const CheegerResult sweep = cheeger_sweep(graph, fiedler);
    min_slack = std::min(min_slack, slack);
    min_gap = std::min(min_gap, sweep.h - exact.h);
    max_ratio = std::max(max_ratio, eig.lambda1 / (exact.h * exact.h / 4.0));
    rows.push_back(Json{{"graph", count(static_cast<std::size_t>(g), "index")},
                        {"vertices", count(static_cast<std::size_t>(n))},
                        {"edges", count(graph.edge_count())},
                        {"h_exact", quantity(exact.h, "exact enumeration", 1e-12)},
                        {"h_sweep", quantity(sweep.h, "sweep/fiedler")},
                        {"lambda1", quantity(eig.lambda1, "dense eigensolver", 1e-9)},
                        {"slack", quantity(slack, "lambda1 - h_exact^2/4", 1e-9)}});
  }
  res.tables["graphs"] = std::move(rows);
  res.add("graphs", count(static_cast<std::size_t>(cc.graphs)));
  res.add("min_slack", quantity(min_slack, "lambda1 (dense) - h_exact^2/4", 1e-9));
  res.add("min_sweep_minus_exact", quantity(min_gap, "h_sweep - h_exact (enumeration)", 1e-12));
  check_ge(res, "cheeger_lower_bound", min_slack, -1e-9, "lambda1 - h^2/4", 1e-9);
  check_ge(res, "sweep_not_below_exact", min_gap, -1e-12, "h_sweep - h_exact", 1e-12);
}

// ---------------------------------------------------------------- spectral

struct SurfaceSpectrum {
  double lambda1 = 0.0;
  double residual = 0.0;
  std::string method;
  std::size_t cluster = 0;
  CheegerResult sweep;
};

SurfaceSpectrum surface_spectrum(const SurfaceMesh& mesh, const SpectralConfig& sc, std::uint64_t seed) {
  const LaplaceOperator op = laplacian(mesh);
  SpectralOptions so;
  so.dense_threshold = static_cast<std::size_t>(sc.dense_threshold);
  so.seed = seed;
  so.tolerance = sc.tolerance;
  const auto pairs = lowest_eigenpairs(op, sc.eigenpairs, so);
  SurfaceSpectrum out;
  out.lambda1 = pairs.front().lambda1;
  out.method = pairs.front().method;
  out.cluster = leading_cluster_size(pairs);
  Eigen::MatrixXd basis(op.mass.size(), static_cast<Eigen::Index>(out.cluster));
  for (std::size_t k = 0; k < out.cluster; ++k) {
    basis.col(static_cast<Eigen::Index>(k)) = pairs[k].eigenvector;
    out.residual = std::max(out.residual, pairs[k].residual);
  }
  EigenspaceSweepOptions eo;
  eo.kernel_samples = static_cast<std::size_t>(sc.kernel_samples);
  out.sweep = cheeger_sweep_eigenspace(mesh, basis, op.mass, eo);
  return out;
}

void spectral_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const SpectralConfig& sc = cfg.spectral;
  auto add_spectrum = [&](const std::string& prefix, const SurfaceSpectrum& s) {
    res.add(prefix + ".lambda1", quantity(s.lambda1, s.method, sc.tolerance));
    res.add(prefix + ".eigen_residual", quantity(s.residual, s.method));
    res.add(prefix + ".lambda1_multiplicity", count(s.cluster, "eigenvalues within 1e-6 relative"));
    res.add(prefix + ".h_sweep", quantity(s.sweep.h, "sweep/" + to_string(s.sweep.rule) + "/eigenspace"));
    res.add(prefix + ".sweep_candidates", count(s.sweep.candidates));
  };

  {
    auto t0 = Clock::now();
    const SurfaceMesh mesh = generate_icosphere(sc.sphere_level);
    const SurfaceSpectrum s = surface_spectrum(mesh, sc, cfg.seed);
    const Partition equator = canonical_partition(mesh);
    const double h_eq = measure(mesh, equator).ratio();
    const TubeProfile prof = level_profile(mesh, signed_distance(mesh, equator), cfg.tube.bins, TubeSide::positive);
    res.add("sphere.vertices", count(mesh.vertex_count()));
    add_spectrum("sphere", s);
    res.add("sphere.h_equator", quantity(h_eq, "canonical cut"));
    res.add("sphere.equator_f0", quantity(prof.f0(), "interface length"));
    check_within(res, "sphere_lambda1", s.lambda1, 2.0, 0.04, s.method);
    check_within(res, "sphere_h_sweep", s.sweep.h, 1.0, 0.1, "sweep");
    check_within(res, "sphere_equator_f0", prof.f0(), kTwoPi, 0.05 * kTwoPi, "interface length");
    res.phase_seconds.emplace_back("sphere", since(t0));
  }

  {
    auto t0 = Clock::now();
    const double L = sc.torus_length;
    const SurfaceMesh mesh = generate_flat_torus(sc.torus_n, sc.torus_n, L, L);
    const SurfaceSpectrum s = surface_spectrum(mesh, sc, cfg.seed);
    res.add("torus.vertices", count(mesh.vertex_count()));
    add_spectrum("torus", s);
    res.add("torus.h_straight", quantity(measure(mesh, canonical_partition(mesh)).ratio(), "canonical cut"));
    const double lambda_ref = 4.0 * std::numbers::pi * std::numbers::pi / (L * L);
    check_within(res, "torus_lambda1", s.lambda1, lambda_ref, 0.02 * lambda_ref, s.method);
    check_within(res, "torus_h_sweep", s.sweep.h, 4.0 / L, 0.4 / L, "sweep");
    res.phase_seconds.emplace_back("torus", since(t0));
  }
}

// ----------------------------------------------------------------- lemma31

struct LemmaMesh {
  std::string name;
  SurfaceMesh mesh;
  double K;
  double rmax;
};

struct LemmaStats {
  double min = INFINITY;
  double median = NAN;
  std::size_t finite = 0;
  std::size_t infinite = 0;
  std::size_t nonpositive = 0;
};

LemmaStats sample_lemma(const LemmaMesh& lm, std::uint64_t seed, int samples) {
  const Partition cut = canonical_partition(lm.mesh);
  const SignedDistanceField field = signed_distance(lm.mesh, cut);
  BallProbe probe(lm.mesh, &cut);
  const double rmin = 2.0 * longest_edge(lm.mesh);
  if (!(lm.rmax > rmin)) throw std::invalid_argument("lemma31: rmax for " + lm.name + " is below twice the edge length");
  auto rng = make_rng(seed, "lemma31/" + lm.name);
  std::uniform_real_distribution<double> radius(rmin, lm.rmax);
  LemmaStats st;
  std::vector<double> finite;
  std::vector<Index> near;
  for (int i = 0; i < samples; ++i) {
    const double r = radius(rng);
    near.clear();
    for (std::size_t v = 0; v < lm.mesh.vertex_count(); ++v)
      if (std::abs(field.rho[v]) < r) near.push_back(static_cast<Index>(v));
    const Index x = near[std::uniform_int_distribution<std::size_t>(0, near.size() - 1)(rng)];
    const double q = local_isoperimetric_ratio(probe, x, r, lm.K);
    if (std::isinf(q)) {
      ++st.infinite;
      continue;
    }
    if (!(q > 0.0)) ++st.nonpositive;
    finite.push_back(q);
    st.min = std::min(st.min, q);
  }
  st.finite = finite.size();
  st.median = median(finite);
  return st;
}

void lemma31_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const Lemma31Config& lc = cfg.lemma31;
  std::vector<LemmaMesh> meshes;
  meshes.push_back({"sphere", generate_icosphere(cfg.spectral.sphere_level), 0.0, lc.sphere_rmax});
  meshes.push_back({"torus",
                    generate_flat_torus(cfg.spectral.torus_n, cfg.spectral.torus_n, cfg.spectral.torus_length,
                                        cfg.spectral.torus_length),
                    0.0, lc.torus_rmax});
  meshes.push_back({"dumbbell", generate_dumbbell(lc.dumbbell_neck, lc.dumbbell_subdivisions), lc.dumbbell_K,
                    lc.dumbbell_rmax});

  const std::uint64_t seeds[2] = {cfg.seed, cfg.seed + 1};
  double overall[2] = {INFINITY, INFINITY};
  std::size_t samples[2] = {0, 0};
  std::size_t nonpositive = 0;
  std::map<std::string, double> first_min;
  const std::string method = "sampled (x, r), canonical cut";
  Json rows = Json::array();
  for (int s = 0; s < 2; ++s) {
    for (const auto& lm : meshes) {
      const LemmaStats st = sample_lemma(lm, seeds[s], lc.samples);
      overall[s] = std::min(overall[s], st.min);
      samples[s] += static_cast<std::size_t>(lc.samples);
      nonpositive += st.nonpositive;
      if (s == 0) first_min[lm.name] = st.min;
      rows.push_back(Json{{"seed", count(static_cast<std::size_t>(seeds[s]), "seed")},
                          {"mesh", lm.name},
                          {"K", quantity(lm.K, "input")},
                          {"samples", count(static_cast<std::size_t>(lc.samples))},
                          {"finite", count(st.finite)},
                          {"infinite", count(st.infinite)},
                          {"min", quantity(st.min, method)},
                          {"median", quantity(st.median, method)}});
    }
  }
  res.tables["samples"] = std::move(rows);
  res.add("min_ratio_seed_a", quantity(overall[0], method));
  res.add("min_ratio_seed_b", quantity(overall[1], method));
  const double spread = std::max(overall[0], overall[1]) / std::min(overall[0], overall[1]);
  res.add("min_ratio_spread", quantity(spread, "max/min over the two seeds"));
  res.check("samples_per_seed", std::min(samples[0], samples[1]) >= 300, count(std::min(samples[0], samples[1])), ">=",
            count(300));
  res.check("ratios_positive", nonpositive == 0, count(nonpositive), "==", count(0));
  check_le(res, "min_ratio_stable", spread, lc.stability_factor, "max/min over seeds");

  // The lemma at r = D gives h >= (C/D) e^{-3(n-1) sqrt(K) D}; C is taken as
  // the sampled minimum of the mesh, so this is a consistency readout.
  Json diam = Json::array();
  for (const auto& lm : meshes) {
    const double D = graph_diameter(lm.mesh.adjacency());
    const double h = measure(lm.mesh, canonical_partition(lm.mesh)).ratio();
    const double bound = diameter_lower_bound(2, lm.K, D, first_min[lm.name]);
    diam.push_back(Json{{"mesh", lm.name},
                        {"diameter", quantity(D, "graph diameter (Dijkstra)")},
                        {"h_canonical", quantity(h, "canonical cut")},
                        {"C", quantity(first_min[lm.name], "sampled minimum, first seed")},
                        {"bound", quantity(bound, "(C/D) e^{-3 sqrt(K) D}")},
                        {"holds", h >= bound}});
  }
  res.tables["diameter_bound"] = std::move(diam);
}

// ------------------------------------------------------------------- buser

void buser_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const BuserConfig& bc = cfg.buser;
  auto t0 = Clock::now();
  Json rows = Json::array();
  Json sweep_rows = Json::array();
  std::vector<double> c_emp;
  std::size_t variational_failures = 0, unresolved = 0;
  std::map<double, Series> by_eps;
  for (double eps : bc.epsilon_sweep) by_eps[eps].name = "eps=" + csv_number(eps);
  std::ostringstream csv;
  csv << "neck_scale,epsilon,h,r,lambda1,rayleigh,c_emp,sigma,cover,multiplicity,variational_ok,resolved\n";

  SpectralOptions so;
  so.seed = cfg.seed;
  for (double neck : bc.neck_scales) {
    const SurfaceMesh mesh = generate_dumbbell(neck, bc.subdivisions);
    const Partition cut = canonical_partition(mesh);
    const double l1 = lambda1(laplacian(mesh), so).lambda1;
    auto run = [&](double eps) {
      BuserOptions bo;
      bo.K = bc.K;
      bo.epsilon = eps;
      bo.spectral = so;
      const BuserReport r = verify_buser(mesh, cut, l1, bo);
      csv << csv_number(neck) << ',' << csv_number(eps) << ',' << csv_number(r.h) << ',' << csv_number(r.r) << ','
          << csv_number(r.lambda1) << ',' << csv_number(r.rayleigh) << ',' << csv_number(r.c_emp) << ','
          << r.sigma_count << ',' << r.cover.k << ',' << r.cover.multiplicity << ',' << r.variational_ok << ','
          << r.resolved << '\n';
      return r;
    };
    const BuserReport r = run(bc.epsilon);
    c_emp.push_back(r.c_emp);
    if (!r.variational_ok) ++variational_failures;
    if (!r.resolved) ++unresolved;
    rows.push_back(Json{{"neck_scale", quantity(neck, "input")},
                        {"vertices", count(mesh.vertex_count())},
                        {"h", quantity(r.h, "canonical cut")},
                        {"r", quantity(r.r, "epsilon min(K^-1/2, 1/h)")},
                        {"lambda1", quantity(r.lambda1, "spectral", so.tolerance)},
                        {"rayleigh", quantity(r.rayleigh, "test function")},
                        {"c_emp", quantity(r.c_emp, "rayleigh r / h")},
                        {"sigma", count(r.sigma_count)},
                        {"a", count(r.a_count)},
                        {"b", count(r.b_count)},
                        {"cover", count(r.cover.k)},
                        {"multiplicity", count(static_cast<std::size_t>(r.cover.multiplicity))},
                        {"variational_ok", r.variational_ok},
                        {"resolved", r.resolved}});
    for (double eps : bc.epsilon_sweep) {
      const BuserReport re = eps == bc.epsilon ? r : run(eps);
      if (!re.variational_ok) ++variational_failures;
      by_eps[eps].x.push_back(neck);
      by_eps[eps].y.push_back(re.c_emp);
      sweep_rows.push_back(Json{{"neck_scale", quantity(neck, "input")},
                                {"epsilon", quantity(eps, "input")},
                                {"r", quantity(re.r, "epsilon min(K^-1/2, 1/h)")},
                                {"c_emp", quantity(re.c_emp, "rayleigh r / h")},
                                {"variational_ok", re.variational_ok},
                                {"resolved", re.resolved}});
    }
  }
  res.phase_seconds.emplace_back("family", since(t0));
  res.tables["family"] = std::move(rows);
  res.tables["epsilon_sweep"] = std::move(sweep_rows);

  const auto [lo, hi] = std::minmax_element(c_emp.begin(), c_emp.end());
  const double spread = *hi / *lo;
  res.add("family.c_emp_min", quantity(*lo, "rayleigh(test function) r / h"));
  res.add("family.c_emp_max", quantity(*hi, "rayleigh(test function) r / h"));
  res.add("family.c_emp_spread", quantity(spread, "max/min over neck scales"));
  res.add("family.unresolved", count(unresolved, "runs with r < 2 longest edge"));
  res.check("variational", variational_failures == 0, count(variational_failures), "==", count(0));
  res.check("c_emp_spread", spread < bc.max_spread, quantity(spread, "max/min over neck scales"), "<",
            quantity(bc.max_spread, "limit"));

  if (bc.sphere) {
    const SurfaceMesh mesh = generate_icosphere(cfg.spectral.sphere_level);
    BuserOptions bo;
    bo.K = bc.K;
    bo.epsilon = bc.epsilon;
    bo.spectral = so;
    const BuserReport r = verify_buser(mesh, canonical_partition(mesh), bo);
    res.add("sphere.h", quantity(r.h, "equator cut"));
    res.add("sphere.lambda1", quantity(r.lambda1, "spectral", bo.spectral.tolerance));
    res.add("sphere.rayleigh", quantity(r.rayleigh, "test function"));
    res.add("sphere.c_emp", quantity(r.c_emp, "rayleigh r / h"));
    res.check("sphere_variational", r.variational_ok, quantity(r.lambda1, "spectral"), "<=",
              quantity(r.rayleigh, "test function", 1e-9));
  }

  res.csv_files.emplace_back("buser_family.csv", csv.str());
  std::vector<Series> series;
  for (auto& [eps, s] : by_eps) series.push_back(s);
  res.svg_files.emplace_back("buser_c_emp.svg", svg_line_plot("C_emp vs neck scale", "neck scale", "C_emp", series));
}

// -------------------------------------------------------------------- tube

void tube_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const TubeConfig& tc = cfg.tube;
  auto profile_case = [&](const std::string& name, const SurfaceMesh& mesh, double f0_ref) {
    const Partition cut = canonical_partition(mesh);
    const SignedDistanceField field = signed_distance(mesh, cut);
    const TubeProfile prof = level_profile(mesh, field, tc.bins, TubeSide::positive);
    // Geodesic interfaces (H = 0) on K = 0 surfaces: envelope constant 0.
    const double C = psi_upper_bound(ComparisonParams{2, 0.0, 0.0}, RhoSide::nonnegative);
    const TubeCheck tc_res = tube_growth_check(prof, C);
    res.add(name + ".f0", quantity(prof.f0(), "interface length"));
    res.add(name + ".f0_reference", quantity(f0_ref, "analytic"));
    res.add(name + ".bin_width", quantity(prof.bin_width, "max |rho| / bins"));
    res.add(name + ".C", quantity(C, "envelope max(H, (n-1) sqrt K)"));
    res.add(name + ".worst_margin", quantity(tc_res.worst_margin, tc_res.limit_form ? "limit form" : "exponential form",
                                             tc_res.slack));
    res.add(name + ".worst_t", quantity(tc_res.worst_t, "bin edge"));
    check_ge(res, name + "_growth", tc_res.worst_margin, -tc_res.slack, "allowed volume - V(0,t)", tc_res.slack);

    std::ostringstream csv;
    prof.write_csv(csv);
    res.csv_files.emplace_back("tube_" + name + "_profile.csv", csv.str());
    Series measured{"V(0,t)", {}, {}};
    Series bound{"f(0) t", {}, {}};
    for (std::size_t i = 0; i < prof.edges.size(); ++i) {
      measured.x.push_back(prof.edges[i]);
      measured.y.push_back(prof.cumulative[i]);
      bound.x.push_back(prof.edges[i]);
      bound.y.push_back(prof.f0() * prof.edges[i]);
    }
    res.svg_files.emplace_back("tube_" + name + ".svg",
                               svg_line_plot(name + " tube volume", "t", "volume", {measured, bound}));
    return field;
  };

  const SurfaceMesh sphere = generate_icosphere(cfg.spectral.sphere_level);
  const SignedDistanceField sf = profile_case("sphere", sphere, kTwoPi);
  const TubeSet band = tube_set(sphere, sf, tc.sphere_band);
  res.add("sphere.band_volume", quantity(band.volume, "faces with all corners in |rho| <= t"));
  res.add("sphere.band_volume_reference", quantity(2.0 * kTwoPi * std::sin(tc.sphere_band), "analytic 4 pi sin t"));

  const double L = cfg.spectral.torus_length;
  const SurfaceMesh torus = generate_flat_torus(cfg.spectral.torus_n, cfg.spectral.torus_n, L, L);
  profile_case("torus", torus, 2.0 * L);
}

// ------------------------------------------------------------------ prop25

void prop25_experiment(const ExperimentConfig& cfg, ExperimentResult& res) {
  const Prop25Config& pc = cfg.prop25;
  const double tol = pc.tolerance * kTwoPi;
  auto add_report = [&](const std::string& name, const BoundaryRatioReport& r) {
    res.add(name + ".boundary_length", quantity(r.boundary_length, "boundary edges"));
    res.add(name + ".area", quantity(r.area, "face areas"));
    res.add(name + ".ratio", quantity(r.ratio, "boundary length / area"));
    res.add(name + ".C0", quantity(r.C0, "discrete geodesic curvature", tol));
    res.add(name + ".diameter", quantity(r.diameter, "dijkstra"));
    res.add(name + ".bound", quantity(r.bound, r.limit_form ? "1/D" : "C0 exp(-C0 D)"));
    res.check(name + "_bound", r.passed, quantity(r.ratio, "boundary length / area"), ">=",
              quantity(r.bound, r.limit_form ? "1/D" : "C0 exp(-C0 D)"));
  };

  const BoundaryRatioReport disk = boundary_ratio_bound(generate_disk(pc.rings));
  const BoundaryRatioReport hemi = boundary_ratio_bound(generate_spherical_cap(std::numbers::pi / 2.0, pc.rings));
  add_report("disk", disk);
  add_report("hemisphere", hemi);
  check_within(res, "disk_C0", disk.C0, kTwoPi, tol, "discrete geodesic curvature");
  check_within(res, "hemisphere_C0", hemi.C0, 0.0, tol, "discrete geodesic curvature");

  Json rows = Json::array();
  for (int rings : pc.refinement) {
    const auto d = boundary_ratio_bound(generate_disk(rings));
    const auto h = boundary_ratio_bound(generate_spherical_cap(std::numbers::pi / 2.0, rings));
    const auto a = boundary_ratio_bound(generate_annulus(pc.annulus_inner, rings));
    const std::string kg = "discrete geodesic curvature";
    rows.push_back(Json{{"rings", count(static_cast<std::size_t>(rings))},
                        {"disk_C0", quantity(d.C0, kg)},
                        {"disk_passed", d.passed},
                        {"hemisphere_C0", quantity(h.C0, kg)},
                        {"hemisphere_ratio", quantity(h.ratio, "boundary length / area")},
                        {"hemisphere_bound", quantity(h.bound, "C0 e^{-C0 D}")},
                        {"hemisphere_passed", h.passed},
                        {"annulus_C0", quantity(a.C0, kg)},
                        {"annulus_passed", a.passed}});
  }
  res.tables["refinement"] = std::move(rows);
}

const std::map<std::string, std::function<void(const ExperimentConfig&, ExperimentResult&)>>& registry() {
  static const std::map<std::string, std::function<void(const ExperimentConfig&, ExperimentResult&)>> r{
      {"riccati", riccati_experiment}, {"cheeger-bound", cheeger_bound_experiment},
      {"spectral", spectral_experiment}, {"lemma31", lemma31_experiment},
      {"buser", buser_experiment},       {"tube", tube_experiment},
      {"prop25", prop25_experiment}};
  return r;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string tool_version() { return CHEEGER_LAB_VERSION; }

ExperimentResult run_experiment(const std::string& id, const ExperimentConfig& config) {
  ExperimentResult res;
  res.id = id;
  const auto it = registry().find(id);
  if (it == registry().end()) throw ConfigError("unknown experiment '" + id + "'");
  const auto t0 = Clock::now();
  try {
    it->second(config, res);
  } catch (const std::exception& e) {
    res.status = "error";
    res.error = e.what();
  }
  res.seconds = since(t0);
  return res;
}

Report run_suite(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::string> ids;
  for (const auto& id : known_experiments())
    if (std::find(config.experiments.begin(), config.experiments.end(), id) != config.experiments.end())
      ids.push_back(id);

  Report report;
  report.tool_version = tool_version();
  report.config_hash = config_hash(config);
  report.seed = config.seed;
  report.started_at = utc_now();
  const auto t0 = Clock::now();

  std::vector<ExperimentResult> results(ids.size());
  std::size_t workers = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, ids.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) results[i] = run_experiment(ids[i], config);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  report.experiments = std::move(results);
  report.total_seconds = since(t0);
  return report;
}

int exit_code(const Report& report) {
  for (const auto& e : report.experiments)
    if (e.status != "ok") return 1;
  return 0;
}

}  // namespace cheeger::lab
