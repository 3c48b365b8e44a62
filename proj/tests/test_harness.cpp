#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "cheeger_lab/config.hpp"
#include "cheeger_lab/experiments.hpp"
#include "cheeger_lab/report.hpp"

using namespace cheeger::lab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

// Quick settings for experiments that finish in well under a second.
ExperimentConfig small_config() {
  return parse(
      "[suite]\n"
      "experiments = riccati, cheeger-bound, tube, prop25\n"
      "seed = 3\n"
      "[riccati]\n"
      "cases = 30\nsamples = 10\nstep = 1e-3\nconstant_cases = 5\nblowup_cases = 3\n"
      "envelope_cases = 20\nenvelope_samples = 20\n"
      "[cheeger-bound]\n"
      "graphs = 15\nmax_vertices = 9\n"
      "[prop25]\n"
      "rings = 8\nrefinement = 4, 8\n");
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cheeger-lab-test-" + name);
  fs::remove_all(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CHEEGER_LAB_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig d = default_config();
  CHECK(d.experiments == known_experiments());
  CHECK(known_experiments().size() == 7);

  const ExperimentConfig c = small_config();
  CHECK(c.experiments == std::vector<std::string>{"riccati", "cheeger-bound", "tube", "prop25"});
  CHECK(c.seed == 3);
  CHECK(c.riccati.step == 1e-3);
  CHECK(c.prop25.refinement == std::vector<int>{4, 8});
  CHECK(c.spectral.torus_n == d.spectral.torus_n);

  const ExperimentConfig b = parse("[buser]\nneck_scales = 0.2,0.3\nsphere = off\n");
  CHECK(b.buser.neck_scales == std::vector<double>{0.2, 0.3});
  CHECK_FALSE(b.buser.sphere);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS((void)parse("[nope]\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[ suite ]\n[nope]\n"), ConfigError);
  CHECK_NOTHROW((void)parse("; comment\n[tube]\n"));
  CHECK_THROWS_AS((void)parse("[riccati]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[riccati]\ncases = many\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[riccati]\nstep = inf\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[buser]\nsphere = maybe\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[suite]\nexperiments = riccati, warp\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[suite]\nexperiments = tube, tube\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[riccati]\nstep = -1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse("[cheeger-bound]\nmax_vertices = 30\n"), ConfigError);
  CHECK_THROWS_AS((void)load_config("/nonexistent/cheeger.ini"), ConfigError);

  ExperimentConfig c = default_config();
  c.threads = -1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS((void)run_suite(c), ConfigError);
  CHECK_THROWS_AS((void)run_experiment("warp", default_config()), ConfigError);
}

TEST_CASE("config hash") {
  const ExperimentConfig a = default_config();
  ExperimentConfig b = a;
  b.out_dir = "elsewhere";
  b.threads = 4;
  b.plots = false;
  b.budget_seconds = 1.0;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).rfind("fnv1a64:", 0) == 0);
  CHECK(config_hash(a).size() == 8 + 16);
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  ExperimentConfig c = a;
  c.tube.bins = 33;
  CHECK(config_hash(a) != config_hash(c));
  CHECK(canonical_text(a) != canonical_text(c));
}

TEST_CASE("quantities") {
  const Json q = quantity(1.5, "closed form", 1e-12);
  CHECK(q["value"] == 1.5);
  CHECK(q["method"] == "closed form");
  CHECK(q["tolerance"] == 1e-12);
  CHECK(quantity(std::numeric_limits<double>::infinity(), "m")["value"].is_null());
  CHECK(quantity(std::numeric_limits<double>::infinity(), "m")["nonfinite"] == "inf");
  CHECK(quantity(-std::numeric_limits<double>::infinity(), "m")["nonfinite"] == "-inf");
  CHECK(quantity(std::nan(""), "m")["nonfinite"] == "nan");
  CHECK(count(7)["value"] == 7);
}

TEST_CASE("empty suite") {
  ExperimentConfig c = default_config();
  c.experiments.clear();
  const Report r = run_suite(c);
  CHECK(r.experiments.empty());
  CHECK(exit_code(r) == 0);
  const Json body = to_json(r);
  CHECK(validate_report(body).empty());
  CHECK(body["experiments"].empty());
  CHECK(to_csv(r) == "experiment,kind,name,value,method,tolerance,passed\n");
}

TEST_CASE("schema validation catches broken bodies") {
  CHECK_FALSE(validate_report(Json::array()).empty());
  Json body = to_json(run_suite([] {
    ExperimentConfig c = default_config();
    c.experiments.clear();
    return c;
  }()));
  body["config_hash"] = "md5:abc";
  CHECK_FALSE(validate_report(body).empty());
  body = to_json(Report{});
  body["config_hash"] = "fnv1a64:0123456789abcdef";
  CHECK(validate_report(body).empty());
  body["experiments"] = Json::array({Json{{"id", "x"}, {"status", "ok"}, {"values", {{"a", 1.0}}},
                                          {"tables", Json::object()}, {"checks", Json::array()}}});
  CHECK_FALSE(validate_report(body).empty());
  body["experiments"][0]["values"]["a"] = quantity(1.0, "m");
  CHECK(validate_report(body).empty());
  body["experiments"][0]["status"] = "great";
  CHECK_FALSE(validate_report(body).empty());
}

TEST_CASE("small suite is deterministic across thread counts") {
  ExperimentConfig one = small_config();
  one.threads = 1;
  ExperimentConfig two = one;
  two.threads = 2;
  const Report a = run_suite(one);
  const Report b = run_suite(two);
  REQUIRE(a.experiments.size() == 4);
  for (std::size_t i = 0; i < a.experiments.size(); ++i) {
    CHECK(a.experiments[i].id == one.experiments[i]);
    CHECK(a.experiments[i].status != "error");
  }
  const Json ja = to_json(a);
  CHECK(validate_report(ja).empty());
  CHECK(ja.dump() == to_json(b).dump());
  CHECK(to_csv(a) == to_csv(b));
  CHECK(ja["config_hash"] == config_hash(one));
  CHECK(ja.dump().find("seconds") == std::string::npos);
  CHECK(timing_json(a).contains("experiments"));

  ExperimentConfig other = one;
  other.seed = 4;
  CHECK(to_json(run_suite(other))["experiments"][1].dump() != ja["experiments"][1].dump());
}

TEST_CASE("report files") {
  ExperimentConfig c = small_config();
  c.experiments = {"tube"};
  const fs::path dir = scratch_dir("files");
  const Report r = run_suite(c);
  write_report(r, dir, true);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "report.timing.json"));
  for (const auto& [name, text] : r.experiments[0].csv_files) CHECK(slurp(dir / name) == text);
  CHECK_FALSE(r.experiments[0].svg_files.empty());
  for (const auto& [name, text] : r.experiments[0].svg_files) CHECK(fs::exists(dir / name));
  CHECK(Json::parse(slurp(dir / "report.json")) == to_json(r));
  fs::remove_all(dir);
}

TEST_CASE("svg plot") {
  const std::string svg = svg_line_plot("t", "x", "y", {Series{"s", {0, 1, 2}, {1, 4, 9}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir("cli");
  fs::create_directories(dir);
  const fs::path log = dir / "log.txt";
  const std::string out = " --out-dir " + (dir / "out").string();

  CHECK(run_cli("--help", log) == 0);
  CHECK(run_cli("--version", log) == 0);
  CHECK(slurp(log).find(tool_version()) != std::string::npos);
  CHECK(run_cli("no-such-command", log) == 2);
  CHECK(run_cli("riccati eval --n 2 --K 1 --H -2 --t 0.25", log) == 0);
  CHECK(slurp(log).find("-3.44023861983") != std::string::npos);
  CHECK(run_cli("riccati eval --n 1 --K 1 --H -2 --t 0.25", log) == 1);

  {
    std::ofstream bad(dir / "bad.ini");
    bad << "[riccati]\ncases = lots\n";
  }
  CHECK(run_cli("suite --config " + (dir / "bad.ini").string() + out, log) == 2);
  CHECK(run_cli("suite --experiments warp" + out, log) == 2);
  CHECK(run_cli("spectral --mesh " + (dir / "missing.off").string(), log) == 2);
  {
    std::ofstream bad(dir / "broken.off");
    bad << "OFF\n3 1 0\n0 0 0\n";
  }
  CHECK(run_cli("spectral --mesh " + (dir / "broken.off").string(), log) == 2);

  {
    std::ofstream ok(dir / "small.ini");
    ok << "[suite]\nexperiments = tube\n";
  }
  CHECK(run_cli("suite --config " + (dir / "small.ini").string() + " --no-plots" + out, log) == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(validate_report(Json::parse(slurp(dir / "out" / "report.json"))).empty());
  CHECK(run_cli("prop25 --family disk --rings 8 --format csv", log) == 0);
  CHECK(slurp(log).rfind("name,value,method,tolerance", 0) == 0);
  CHECK(run_cli("cheeger --family sphere --level 2", log) == 0);
  fs::remove_all(dir);
}
