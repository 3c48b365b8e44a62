#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cheeger::lab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RiccatiConfig {
  int cases = 1000;
  int samples = 100;
  double step = 1e-5;
  double horizon = 2.0;   ///< sample window when T is infinite
  double margin = 1e-3;   ///< distance kept from a finite T
  double tolerance = 1e-8;
  int constant_cases = 50;
  int blowup_cases = 20;
  int envelope_cases = 1000;
  int envelope_samples = 1000;
};

struct CheegerBoundConfig {
  int graphs = 200;
  int min_vertices = 4;
  int max_vertices = 12;
  double edge_probability = 0.3;
};

struct SpectralConfig {
  int sphere_level = 4;
  int torus_n = 64;
  double torus_length = 1.0;
  int dense_threshold = 500;
  double tolerance = 1e-8;
  int eigenpairs = 6;
  int kernel_samples = 64;
};

struct Lemma31Config {
  int samples = 120;  ///< per mesh and seed
  double sphere_rmax = 0.5235987755982988;  // pi / 6
  double torus_rmax = 0.15;
  double dumbbell_rmax = 0.5;
  double dumbbell_neck = 0.3;
  int dumbbell_subdivisions = 4;
  double dumbbell_K = 1.0;
  double stability_factor = 2.0;
};

struct BuserConfig {
  std::vector<double> neck_scales{0.1, 0.2, 0.3, 0.4, 0.5};
  int subdivisions = 4;
  double K = 1.0;
  double epsilon = 0.1;
  std::vector<double> epsilon_sweep{0.05, 0.1, 0.2};
  double max_spread = 5.0;
  bool sphere = true;
};

struct TubeConfig {
  int bins = 32;
  double sphere_band = 0.5;
};

struct Prop25Config {
  int rings = 16;
  std::vector<int> refinement{8, 16, 32};
  double annulus_inner = 0.5;
  double tolerance = 0.1;  ///< fraction of 2 pi allowed for |C0 - analytic|
};

struct ExperimentConfig {
  std::vector<std::string> experiments;
  std::uint64_t seed = 0;
  int threads = 1;  ///< 0: one per hardware thread
  std::string out_dir = "cheeger-out";
  bool plots = true;
  double budget_seconds = 300.0;  ///< soft warning only

  RiccatiConfig riccati;
  CheegerBoundConfig cheeger_bound;
  SpectralConfig spectral;
  Lemma31Config lemma31;
  BuserConfig buser;
  TubeConfig tube;
  Prop25Config prop25;
};

/// Experiment ids in suite order.
[[nodiscard]] const std::vector<std::string>& known_experiments();

/// Every known experiment with default parameters.
[[nodiscard]] ExperimentConfig default_config();

/// INI text. Sections: [suite], [riccati], [cheeger-bound], [spectral],
/// [lemma31], [buser], [tube], [prop25]. Unknown sections or keys, bad
/// numbers and invalid values throw ConfigError before anything runs.
[[nodiscard]] ExperimentConfig parse_config(std::istream& in);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

void validate(const ExperimentConfig& config);

/// Stable text form of every setting that can change a reported number
/// (seed included; out_dir, threads, plots and budget excluded).
[[nodiscard]] std::string canonical_text(const ExperimentConfig& config);

/// "fnv1a64:" + 16 hex digits of the canonical text.
[[nodiscard]] std::string config_hash(const ExperimentConfig& config);

}  // namespace cheeger::lab
