#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cheeger/buser.hpp"
#include "cheeger/cheeger_cut.hpp"
#include "cheeger/generators.hpp"
#include "cheeger/laplacian.hpp"
#include "cheeger/off_io.hpp"
#include "cheeger/riccati.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/tube.hpp"
#include "cheeger_lab/config.hpp"
#include "cheeger_lab/experiments.hpp"
#include "cheeger_lab/report.hpp"

namespace {

using namespace cheeger;
using cheeger::lab::Json;
using cheeger::lab::quantity;

/// Bad command-line input; maps to exit code 2 like a config error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string format = "json";
  std::optional<int> threads;
  bool no_plots = false;
};

struct MeshArgs {
  std::string mesh;
  std::string family;
  int level = 4;
  int grid = 64;
  double length = 1.0;
  double neck = 0.3;
  int subdivisions = 4;
  int rings = 16;
  double cap_angle = std::numbers::pi / 2.0;
  double inner = 0.5;
  std::string save_mesh;

  [[nodiscard]] bool given() const { return !mesh.empty() || !family.empty(); }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI config file")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "Override the config seed");
  app->add_option("--out-dir", c.out_dir, "Directory for report files");
  app->add_option("--format", c.format, "Output on stdout")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--threads", c.threads, "Worker threads (0: all cores)");
  app->add_flag("--no-plots", c.no_plots, "Skip SVG output");
}

void add_mesh(CLI::App* app, MeshArgs& m) {
  auto* file = app->add_option("--mesh", m.mesh, "OFF mesh file")->check(CLI::ExistingFile);
  app->add_option("--family", m.family, "Generated mesh")
      ->check(CLI::IsMember({"sphere", "torus", "dumbbell", "disk", "cap", "annulus"}))
      ->excludes(file);
  app->add_option("--level", m.level, "Icosphere subdivision level");
  app->add_option("--grid", m.grid, "Torus cells per side");
  app->add_option("--length", m.length, "Torus side length");
  app->add_option("--neck", m.neck, "Dumbbell neck scale");
  app->add_option("--subdivisions", m.subdivisions, "Dumbbell resolution");
  app->add_option("--rings", m.rings, "Disk, cap and annulus rings");
  app->add_option("--cap-angle", m.cap_angle, "Polar angle of the spherical cap");
  app->add_option("--inner", m.inner, "Annulus inner radius");
  app->add_option("--save-mesh", m.save_mesh, "Write the mesh as OFF");
}

SurfaceMesh make_mesh(const MeshArgs& m) {
  SurfaceMesh mesh = [&] {
    if (!m.mesh.empty()) return load_mesh(m.mesh);
    if (m.family == "sphere") return generate_icosphere(m.level);
    if (m.family == "torus") return generate_flat_torus(m.grid, m.grid, m.length, m.length);
    if (m.family == "dumbbell") return generate_dumbbell(m.neck, m.subdivisions);
    if (m.family == "disk") return generate_disk(m.rings);
    if (m.family == "cap") return generate_spherical_cap(m.cap_angle, m.rings);
    if (m.family == "annulus") return generate_annulus(m.inner, m.rings);
    throw UsageError("give --mesh or --family");
  }();
  if (!m.save_mesh.empty()) save_mesh(m.save_mesh, mesh);
  return mesh;
}

lab::ExperimentConfig load(const Common& c) {
  lab::ExperimentConfig cfg = c.config.empty() ? lab::default_config() : lab::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out_dir) cfg.out_dir = *c.out_dir;
  if (c.threads) cfg.threads = *c.threads;
  if (c.no_plots) cfg.plots = false;
  lab::validate(cfg);
  return cfg;
}

/// Flat key/value output for single results.
void emit(const Json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << "name,value,method,tolerance\n";
  for (const auto& [k, v] : j.items()) {
    if (v.is_object() && v.contains("method"))
      std::cout << k << ',' << (v["value"].is_null() ? v.value("nonfinite", "nan") : v["value"].dump()) << ','
                << v["method"].get<std::string>() << ',' << v["tolerance"].dump() << '\n';
    else
      std::cout << k << ',' << v.dump() << ",,\n";
  }
}

int run_experiments(const Common& c, std::vector<std::string> ids) {
  lab::ExperimentConfig cfg = load(c);
  if (!ids.empty()) cfg.experiments = std::move(ids);
  const lab::Report report = lab::run_suite(cfg);
  lab::write_report(report, cfg.out_dir, cfg.plots);
  if (c.format == "json")
    std::cout << lab::to_json(report).dump(2) << '\n';
  else
    std::cout << lab::to_csv(report);
  if (report.total_seconds > cfg.budget_seconds)
    std::cerr << "warning: suite took " << report.total_seconds << " s, budget " << cfg.budget_seconds << " s\n";
  for (const auto& e : report.experiments) {
    if (e.status == "error") std::cerr << e.id << ": error: " << e.error << '\n';
    for (const auto& chk : e.checks)
      if (!chk.passed) std::cerr << e.id << ": check failed: " << chk.name << '\n';
  }
  return lab::exit_code(report);
}

SpectralOptions spectral_options(const std::string& method, double tol, std::uint64_t seed) {
  SpectralOptions so;
  so.method = method == "dense" ? EigenMethod::dense
              : method == "iterative" ? EigenMethod::iterative
                                      : EigenMethod::automatic;
  so.tolerance = tol;
  so.seed = seed;
  return so;
}

Partition cut_for(const SurfaceMesh& mesh) {
  try {
    return canonical_partition(mesh);
  } catch (const std::exception&) {
    throw UsageError("this command needs a generated sphere, torus or dumbbell (no canonical cut for the mesh)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cheeger and Buser inequality experiments on discrete surfaces", "cheeger-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lab::tool_version());

  Common common;
  MeshArgs mesh_args;

  auto* riccati = app.add_subcommand("riccati", "Riccati comparison equation checks");
  add_common(riccati, common);
  auto* eval = riccati->add_subcommand("eval", "Evaluate psi, T and envelopes");
  ComparisonParams params;
  double eval_t = 0.0;
  bool oracle = false;
  double oracle_step = 1e-5;
  eval->add_option("--n", params.n, "Dimension")->required();
  eval->add_option("--K", params.K, "Curvature bound")->required();
  eval->add_option("--H", params.H, "Initial mean curvature")->required();
  eval->add_option("--t", eval_t, "Time")->required();
  eval->add_flag("--oracle", oracle, "Also integrate with RK4");
  eval->add_option("--step", oracle_step, "RK4 step");

  std::string method = "auto";
  double tolerance = 1e-8;
  int eigenpairs = 6;
  auto* spectral = app.add_subcommand("spectral", "First eigenvalues of a mesh, or the spectral experiment");
  add_common(spectral, common);
  add_mesh(spectral, mesh_args);
  spectral->add_option("--method", method, "Eigensolver")->check(CLI::IsMember({"auto", "dense", "iterative"}));
  spectral->add_option("--tolerance", tolerance, "Relative residual tolerance");
  spectral->add_option("--eigenpairs", eigenpairs, "Number of nonzero eigenpairs");

  auto* cheeger_cmd = app.add_subcommand("cheeger", "Sweep cut of a mesh, or the random-graph Cheeger bound");
  add_common(cheeger_cmd, common);
  add_mesh(cheeger_cmd, mesh_args);
  cheeger_cmd->add_option("--eigenpairs", eigenpairs, "Eigenpairs searched for a degenerate first eigenvalue");

  BuserOptions buser_opts;
  auto* buser = app.add_subcommand("verify-buser", "Buser test function on a mesh, or the dumbbell family");
  add_common(buser, common);
  add_mesh(buser, mesh_args);
  buser->add_option("--K", buser_opts.K, "Curvature bound");
  buser->add_option("--epsilon", buser_opts.epsilon, "r = epsilon min(K^-1/2, 1/h)");

  auto* lemma = app.add_subcommand("lemma31", "Local isoperimetric ratio sampling");
  add_common(lemma, common);

  int bins = 32;
  auto* tube = app.add_subcommand("tube", "Tube volume profiles");
  add_common(tube, common);
  add_mesh(tube, mesh_args);
  tube->add_option("--bins", bins, "Profile bins");

  auto* prop = app.add_subcommand("prop25", "Boundary-ratio bound");
  add_common(prop, common);
  add_mesh(prop, mesh_args);

  std::vector<std::string> suite_ids;
  auto* suite = app.add_subcommand("suite", "Run the configured experiments");
  add_common(suite, common);
  suite->add_option("--experiments", suite_ids, "Subset of experiments")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) {
      Json j = Json::object();
      j["n"] = params.n;
      j["K"] = params.K;
      j["H"] = params.H;
      j["t"] = eval_t;
      const double T = max_existence_time(params);
      j["T"] = quantity(T, "closed form");
      j["psi"] = quantity(psi_closed_form(params, eval_t), "closed form");
      j["envelope_nonnegative"] = quantity(psi_upper_bound(params, RhoSide::nonnegative), "envelope");
      j["envelope_nonpositive"] = quantity(psi_upper_bound(params, RhoSide::nonpositive), "envelope");
      if (oracle) {
        const auto traj = integrate_riccati(params, eval_t, oracle_step, RiccatiOptions{1e12, 1u << 30});
        j["psi_rk4"] = quantity(traj.psi.back(), "rk4 step " + std::to_string(oracle_step));
        j["rk4_blew_up"] = traj.blew_up;
      }
      emit(j, common.format);
      return 0;
    }
    if (*riccati) return run_experiments(common, {"riccati"});
    if (*lemma) return run_experiments(common, {"lemma31"});
    if (*suite) return run_experiments(common, suite_ids);

    if (*spectral) {
      if (!mesh_args.given()) return run_experiments(common, {"spectral"});
      const SurfaceMesh mesh = make_mesh(mesh_args);
      const auto pairs = lowest_eigenpairs(laplacian(mesh), eigenpairs,
                                           spectral_options(method, tolerance, common.seed.value_or(0)));
      Json j = Json::object();
      j["vertices"] = mesh.vertex_count();
      for (std::size_t k = 0; k < pairs.size(); ++k)
        j["lambda" + std::to_string(k + 1)] = quantity(pairs[k].lambda1, pairs[k].method, pairs[k].residual);
      j["lambda1_multiplicity"] = leading_cluster_size(pairs);
      emit(j, common.format);
      return 0;
    }
    if (*cheeger_cmd) {
      if (!mesh_args.given()) return run_experiments(common, {"cheeger-bound"});
      const SurfaceMesh mesh = make_mesh(mesh_args);
      const LaplaceOperator op = laplacian(mesh);
      const auto pairs = lowest_eigenpairs(op, eigenpairs, spectral_options("auto", 1e-8, common.seed.value_or(0)));
      const std::size_t cluster = leading_cluster_size(pairs);
      Eigen::MatrixXd basis(op.mass.size(), static_cast<Eigen::Index>(cluster));
      for (std::size_t k = 0; k < cluster; ++k) basis.col(static_cast<Eigen::Index>(k)) = pairs[k].eigenvector;
      const CheegerResult r = cheeger_sweep_eigenspace(mesh, basis, op.mass);
      Json j = Json::object();
      j["h"] = quantity(r.h, "sweep/" + to_string(r.rule) + "/eigenspace");
      j["vol_a"] = quantity(r.measures.vol_a, "face areas");
      j["vol_b"] = quantity(r.measures.vol_b, "face areas");
      j["interface"] = quantity(r.measures.interface, "interface length");
      j["candidates"] = r.candidates;
      try {
        j["h_canonical"] = quantity(measure(mesh, canonical_partition(mesh)).ratio(), "canonical cut");
      } catch (const std::invalid_argument&) {
      }
      emit(j, common.format);
      return 0;
    }
    if (*buser) {
      if (!mesh_args.given()) return run_experiments(common, {"buser"});
      const SurfaceMesh mesh = make_mesh(mesh_args);
      buser_opts.spectral.seed = common.seed.value_or(0);
      const BuserReport r = verify_buser(mesh, cut_for(mesh), buser_opts);
      Json j = Json::object();
      j["h"] = quantity(r.h, "canonical cut");
      j["r"] = quantity(r.r, "epsilon min(K^-1/2, 1/h)");
      j["lambda1"] = quantity(r.lambda1, "spectral", buser_opts.spectral.tolerance);
      j["rayleigh"] = quantity(r.rayleigh, "test function");
      j["c_emp"] = quantity(r.c_emp, "rayleigh r / h");
      j["sigma"] = r.sigma_count;
      j["a"] = r.a_count;
      j["b"] = r.b_count;
      j["cover"] = r.cover.k;
      j["multiplicity"] = r.cover.multiplicity;
      j["variational_ok"] = r.variational_ok;
      j["resolved"] = r.resolved;
      emit(j, common.format);
      return r.variational_ok ? 0 : 1;
    }
    if (*tube) {
      if (!mesh_args.given()) return run_experiments(common, {"tube"});
      const SurfaceMesh mesh = make_mesh(mesh_args);
      const auto field = signed_distance(mesh, cut_for(mesh));
      const TubeProfile prof = level_profile(mesh, field, bins, TubeSide::positive);
      if (common.format == "csv") {
        prof.write_csv(std::cout);
        return 0;
      }
      const TubeCheck chk = tube_growth_check(prof, 0.0);
      Json j = Json::object();
      j["f0"] = quantity(prof.f0(), "interface length");
      j["side_volume"] = quantity(prof.side_volume, "face areas");
      j["worst_margin"] = quantity(chk.worst_margin, "limit form", chk.slack);
      j["passed"] = chk.passed;
      emit(j, common.format);
      return chk.passed ? 0 : 1;
    }
    if (*prop) {
      if (!mesh_args.given()) return run_experiments(common, {"prop25"});
      const BoundaryRatioReport r = boundary_ratio_bound(make_mesh(mesh_args));
      Json j = Json::object();
      j["boundary_length"] = quantity(r.boundary_length, "boundary edges");
      j["area"] = quantity(r.area, "face areas");
      j["ratio"] = quantity(r.ratio, "boundary length / area");
      j["C0"] = quantity(r.C0, "discrete geodesic curvature");
      j["diameter"] = quantity(r.diameter, "dijkstra");
      j["bound"] = quantity(r.bound, r.limit_form ? "1/D" : "C0 exp(-C0 D)");
      j["passed"] = r.passed;
      emit(j, common.format);
      return r.passed ? 0 : 1;
    }
  } catch (const lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const MeshFormatError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
