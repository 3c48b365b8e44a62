#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace cheeger::lab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"value": x, "method": m, "tolerance": t}. Non-finite values are written
/// as null with a "nonfinite" marker ("inf", "-inf" or "nan").
[[nodiscard]] Json quantity(double value, const std::string& method, double tolerance = 0.0);
[[nodiscard]] Json count(std::size_t value, const std::string& method = "count");

struct Check {
  std::string name;
  bool passed = false;
  Json observed;       ///< quantity
  std::string relation;  ///< "<=", ">=", "in", "=="
  Json limit;          ///< quantity or [lo, hi] of quantities
};

struct ExperimentResult {
  std::string id;
  std::string status = "ok";  ///< ok, failed (a check did not hold) or error (exception)
  std::string error;
  Json values = Json::object();
  Json tables = Json::object();
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> csv_files;  ///< name, content
  std::vector<std::pair<std::string, std::string>> svg_files;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> phase_seconds;  ///< timing only, never in the body

  void add(const std::string& name, Json q) { values[name] = std::move(q); }
  void check(const std::string& name, bool passed, Json observed, const std::string& relation, Json limit);
  [[nodiscard]] const Check* find_check(const std::string& name) const;
  [[nodiscard]] double phase(const std::string& name) const;
};

struct Report {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<ExperimentResult> experiments;
  double total_seconds = 0.0;
  std::string started_at;  ///< UTC, ISO 8601

  [[nodiscard]] const ExperimentResult* find(const std::string& id) const;
};

/// Deterministic report body: no timings and no timestamps.
[[nodiscard]] Json to_json(const Report& report);
/// Wall-clock data kept apart from the body.
[[nodiscard]] Json timing_json(const Report& report);
/// One row per value and check: experiment,kind,name,value,method,tolerance,passed.
[[nodiscard]] std::string to_csv(const Report& report);

/// Structural problems of a report body; empty when it matches the schema.
[[nodiscard]] std::vector<std::string> validate_report(const Json& body);

/// Writes report.json, report.csv, report.timing.json and the per-experiment
/// CSV (and, if requested, SVG) files under out_dir.
void write_report(const Report& report, const std::filesystem::path& out_dir, bool plots);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG line chart.
[[nodiscard]] std::string svg_line_plot(const std::string& title, const std::string& x_label,
                                        const std::string& y_label, const std::vector<Series>& series);

}  // namespace cheeger::lab
