#include "cheeger_lab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cheeger::lab {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& where, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(where + ": '" + text + "' is not a valid number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(where + ": value must be finite");
  }
  return value;
}

bool parse_bool(const std::string& where, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(where + ": '" + text + "' is not a boolean");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(items[i]);
    else if constexpr (std::is_same_v<T, std::string>)
      out += items[i];
    else
      out += std::to_string(items[i]);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(const std::string&, const std::string&)> set;
  std::function<std::string()> get;
};

Field int_field(std::string section, std::string key, int& ref) {
  return {section, key, [&ref](const std::string& w, const std::string& v) { ref = parse_number<int>(w, v); },
          [&ref] { return std::to_string(ref); }};
}

Field double_field(std::string section, std::string key, double& ref) {
  return {section, key, [&ref](const std::string& w, const std::string& v) { ref = parse_number<double>(w, v); },
          [&ref] { return format_double(ref); }};
}

Field double_list_field(std::string section, std::string key, std::vector<double>& ref) {
  return {section, key,
          [&ref](const std::string& w, const std::string& v) {
            ref.clear();
            for (const auto& item : split_list(v)) ref.push_back(parse_number<double>(w, item));
          },
          [&ref] { return join(ref); }};
}

Field int_list_field(std::string section, std::string key, std::vector<int>& ref) {
  return {section, key,
          [&ref](const std::string& w, const std::string& v) {
            ref.clear();
            for (const auto& item : split_list(v)) ref.push_back(parse_number<int>(w, item));
          },
          [&ref] { return join(ref); }};
}

std::vector<Field> fields(ExperimentConfig& c) {
  std::vector<Field> f;
  f.push_back({"suite", "experiments", [&c](const std::string&, const std::string& v) { c.experiments = split_list(v); },
               [&c] { return join(c.experiments); }});
  f.push_back({"suite", "seed",
               [&c](const std::string& w, const std::string& v) { c.seed = parse_number<std::uint64_t>(w, v); },
               [&c] { return std::to_string(c.seed); }});
  f.push_back(int_field("suite", "threads", c.threads));
  f.push_back({"suite", "out_dir", [&c](const std::string&, const std::string& v) { c.out_dir = trim(v); },
               [&c] { return c.out_dir; }});
  f.push_back({"suite", "plots", [&c](const std::string& w, const std::string& v) { c.plots = parse_bool(w, v); },
               [&c] { return std::string(c.plots ? "true" : "false"); }});
  f.push_back(double_field("suite", "budget_seconds", c.budget_seconds));

  auto& r = c.riccati;
  f.push_back(int_field("riccati", "cases", r.cases));
  f.push_back(int_field("riccati", "samples", r.samples));
  f.push_back(double_field("riccati", "step", r.step));
  f.push_back(double_field("riccati", "horizon", r.horizon));
  f.push_back(double_field("riccati", "margin", r.margin));
  f.push_back(double_field("riccati", "tolerance", r.tolerance));
  f.push_back(int_field("riccati", "constant_cases", r.constant_cases));
  f.push_back(int_field("riccati", "blowup_cases", r.blowup_cases));
  f.push_back(int_field("riccati", "envelope_cases", r.envelope_cases));
  f.push_back(int_field("riccati", "envelope_samples", r.envelope_samples));

  auto& g = c.cheeger_bound;
  f.push_back(int_field("cheeger-bound", "graphs", g.graphs));
  f.push_back(int_field("cheeger-bound", "min_vertices", g.min_vertices));
  f.push_back(int_field("cheeger-bound", "max_vertices", g.max_vertices));
  f.push_back(double_field("cheeger-bound", "edge_probability", g.edge_probability));

  auto& s = c.spectral;
  f.push_back(int_field("spectral", "sphere_level", s.sphere_level));
  f.push_back(int_field("spectral", "torus_n", s.torus_n));
  f.push_back(double_field("spectral", "torus_length", s.torus_length));
  f.push_back(int_field("spectral", "dense_threshold", s.dense_threshold));
  f.push_back(double_field("spectral", "tolerance", s.tolerance));
  f.push_back(int_field("spectral", "eigenpairs", s.eigenpairs));
  f.push_back(int_field("spectral", "kernel_samples", s.kernel_samples));

  auto& l = c.lemma31;
  f.push_back(int_field("lemma31", "samples", l.samples));
  f.push_back(double_field("lemma31", "sphere_rmax", l.sphere_rmax));
  f.push_back(double_field("lemma31", "torus_rmax", l.torus_rmax));
  f.push_back(double_field("lemma31", "dumbbell_rmax", l.dumbbell_rmax));
  f.push_back(double_field("lemma31", "dumbbell_neck", l.dumbbell_neck));
  f.push_back(int_field("lemma31", "dumbbell_subdivisions", l.dumbbell_subdivisions));
  f.push_back(double_field("lemma31", "dumbbell_K", l.dumbbell_K));
  f.push_back(double_field("lemma31", "stability_factor", l.stability_factor));

  auto& b = c.buser;
  f.push_back(double_list_field("buser", "neck_scales", b.neck_scales));
  f.push_back(int_field("buser", "subdivisions", b.subdivisions));
  f.push_back(double_field("buser", "K", b.K));
  f.push_back(double_field("buser", "epsilon", b.epsilon));
  f.push_back(double_list_field("buser", "epsilon_sweep", b.epsilon_sweep));
  f.push_back(double_field("buser", "max_spread", b.max_spread));
  f.push_back({"buser", "sphere", [&b](const std::string& w, const std::string& v) { b.sphere = parse_bool(w, v); },
               [&b] { return std::string(b.sphere ? "true" : "false"); }});

  f.push_back(int_field("tube", "bins", c.tube.bins));
  f.push_back(double_field("tube", "sphere_band", c.tube.sphere_band));

  auto& p = c.prop25;
  f.push_back(int_field("prop25", "rings", p.rings));
  f.push_back(int_list_field("prop25", "refinement", p.refinement));
  f.push_back(double_field("prop25", "annulus_inner", p.annulus_inner));
  f.push_back(double_field("prop25", "tolerance", p.tolerance));
  return f;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> ids{"riccati", "cheeger-bound", "spectral", "lemma31",
                                            "buser",   "tube",          "prop25"};
  return ids;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.experiments = known_experiments();
  return c;
}

ExperimentConfig parse_config(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  ExperimentConfig config = default_config();
  auto table = fields(config);
  // The INI reader drops sections without keys, so headers are checked here.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    line = trim(line);
    if (line.empty() || line.front() != '[') continue;
    const std::string name = trim(line.substr(1, line.find(']') == std::string::npos ? std::string::npos : line.find(']') - 1));
    if (std::none_of(table.begin(), table.end(), [&](const Field& f) { return f.section == name; }))
      throw ConfigError("config: unknown section [" + name + "]");
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream body(text);
    boost::property_tree::ini_parser::read_ini(body, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside any section");
    bool known_section = false;
    for (const auto& fld : table) known_section |= fld.section == section;
    if (!known_section) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      const auto it = std::find_if(table.begin(), table.end(),
                                   [&](const Field& fld) { return fld.section == section && fld.key == key; });
      if (it == table.end()) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      it->set("config: [" + section + "] " + key, value.data());
    }
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

void validate(const ExperimentConfig& c) {
  for (const auto& id : c.experiments)
    require(std::find(known_experiments().begin(), known_experiments().end(), id) != known_experiments().end(),
            "config: unknown experiment '" + id + "'");
  for (std::size_t i = 0; i < c.experiments.size(); ++i)
    for (std::size_t j = i + 1; j < c.experiments.size(); ++j)
      require(c.experiments[i] != c.experiments[j], "config: experiment '" + c.experiments[i] + "' listed twice");
  require(c.threads >= 0, "config: threads must be >= 0");
  require(!c.out_dir.empty(), "config: out_dir must not be empty");
  require(c.budget_seconds > 0.0, "config: budget_seconds must be > 0");

  const auto& r = c.riccati;
  require(r.cases >= 0 && r.samples >= 2, "config: riccati needs cases >= 0 and samples >= 2");
  require(r.step > 0.0 && r.horizon > 0.0 && r.margin > 0.0 && r.tolerance > 0.0,
          "config: riccati step, horizon, margin and tolerance must be > 0");
  require(r.horizon / r.step <= 1e8, "config: riccati horizon / step exceeds 1e8 steps");
  require(r.constant_cases >= 0 && r.blowup_cases >= 0 && r.envelope_cases >= 0 && r.envelope_samples >= 2,
          "config: riccati case counts must be >= 0");

  const auto& g = c.cheeger_bound;
  require(g.graphs >= 0, "config: cheeger-bound graphs must be >= 0");
  require(g.min_vertices >= 2 && g.max_vertices >= g.min_vertices && g.max_vertices <= 22,
          "config: cheeger-bound needs 2 <= min_vertices <= max_vertices <= 22");
  require(g.edge_probability >= 0.0 && g.edge_probability <= 1.0, "config: edge_probability must be in [0, 1]");

  const auto& s = c.spectral;
  require(s.sphere_level >= 1 && s.sphere_level <= 8, "config: spectral sphere_level must be in [1, 8]");
  require(s.torus_n >= 4 && s.torus_n % 2 == 0, "config: spectral torus_n must be even and >= 4");
  require(s.torus_length > 0.0, "config: spectral torus_length must be > 0");
  require(s.dense_threshold >= 0 && s.tolerance > 0.0, "config: spectral dense_threshold >= 0, tolerance > 0");
  require(s.eigenpairs >= 1 && s.kernel_samples >= 0, "config: spectral eigenpairs >= 1, kernel_samples >= 0");

  const auto& l = c.lemma31;
  require(l.samples >= 1, "config: lemma31 samples must be >= 1");
  require(l.sphere_rmax > 0.0 && l.torus_rmax > 0.0 && l.dumbbell_rmax > 0.0, "config: lemma31 radii must be > 0");
  require(l.dumbbell_neck > 0.0 && l.dumbbell_neck <= 1.0, "config: lemma31 dumbbell_neck must be in (0, 1]");
  require(l.dumbbell_subdivisions >= 0 && l.dumbbell_subdivisions <= 6, "config: lemma31 dumbbell_subdivisions in [0, 6]");
  require(l.dumbbell_K >= 0.0 && l.stability_factor >= 1.0, "config: lemma31 dumbbell_K >= 0, stability_factor >= 1");

  const auto& b = c.buser;
  require(!b.neck_scales.empty(), "config: buser neck_scales must not be empty");
  for (double s2 : b.neck_scales) require(s2 > 0.0 && s2 <= 1.0, "config: buser neck scales must be in (0, 1]");
  require(b.subdivisions >= 0 && b.subdivisions <= 6, "config: buser subdivisions must be in [0, 6]");
  require(b.K >= 0.0 && b.epsilon > 0.0 && b.max_spread >= 1.0, "config: buser K >= 0, epsilon > 0, max_spread >= 1");
  for (double e : b.epsilon_sweep) require(e > 0.0, "config: buser epsilon_sweep values must be > 0");

  require(c.tube.bins >= 4, "config: tube bins must be >= 4");
  require(c.tube.sphere_band > 0.0 && c.tube.sphere_band < 1.5707963267948966,
          "config: tube sphere_band must be in (0, pi/2)");

  const auto& p = c.prop25;
  require(p.rings >= 2, "config: prop25 rings must be >= 2");
  for (int rings : p.refinement) require(rings >= 2, "config: prop25 refinement ring counts must be >= 2");
  require(p.annulus_inner > 0.0 && p.annulus_inner < 1.0, "config: prop25 annulus_inner must be in (0, 1)");
  require(p.tolerance > 0.0, "config: prop25 tolerance must be > 0");
}

std::string canonical_text(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  std::string out;
  for (const auto& fld : fields(copy)) {
    // output location and scheduling do not change any number
    if (fld.section == "suite" && (fld.key == "out_dir" || fld.key == "threads" || fld.key == "plots" ||
                                   fld.key == "budget_seconds"))
      continue;
    out += fld.section + "." + fld.key + "=" + fld.get() + "\n";
  }
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cheeger::lab
