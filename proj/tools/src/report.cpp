#include "cheeger_lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace cheeger::lab {

Json quantity(double value, const std::string& method, double tolerance) {
  Json q = Json::object();
  if (std::isfinite(value)) {
    q["value"] = value;
  } else {
    q["value"] = nullptr;
    q["nonfinite"] = std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  }
  q["method"] = method;
  q["tolerance"] = tolerance;
  return q;
}

Json count(std::size_t value, const std::string& method) {
  Json q = Json::object();
  q["value"] = value;
  q["method"] = method;
  q["tolerance"] = 0.0;
  return q;
}

void ExperimentResult::check(const std::string& name, bool passed, Json observed, const std::string& relation,
                             Json limit) {
  checks.push_back({name, passed, std::move(observed), relation, std::move(limit)});
  if (!passed && status == "ok") status = "failed";
}

const Check* ExperimentResult::find_check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double ExperimentResult::phase(const std::string& name) const {
  for (const auto& [n, s] : phase_seconds)
    if (n == name) return s;
  return NAN;
}

const ExperimentResult* Report::find(const std::string& id) const {
  for (const auto& e : experiments)
    if (e.id == id) return &e;
  return nullptr;
}

Json to_json(const Report& report) {
  Json body = Json::object();
  body["schema_version"] = kSchemaVersion;
  body["tool_version"] = report.tool_version;
  body["config_hash"] = report.config_hash;
  body["seed"] = report.seed;
  Json experiments = Json::array();
  for (const auto& e : report.experiments) {
    Json item = Json::object();
    item["id"] = e.id;
    item["status"] = e.status;
    if (e.status == "error") item["error"] = e.error;
    item["values"] = e.values;
    item["tables"] = e.tables;
    Json checks = Json::array();
    for (const auto& c : e.checks) {
      Json cj = Json::object();
      cj["name"] = c.name;
      cj["passed"] = c.passed;
      cj["observed"] = c.observed;
      cj["relation"] = c.relation;
      cj["limit"] = c.limit;
      checks.push_back(std::move(cj));
    }
    item["checks"] = std::move(checks);
    experiments.push_back(std::move(item));
  }
  body["experiments"] = std::move(experiments);
  return body;
}

Json timing_json(const Report& report) {
  Json t = Json::object();
  t["started_at"] = report.started_at;
  t["total_seconds"] = report.total_seconds;
  Json per = Json::object();
  Json phases = Json::object();
  for (const auto& e : report.experiments) {
    per[e.id] = e.seconds;
    if (e.phase_seconds.empty()) continue;
    Json p = Json::object();
    for (const auto& [name, s] : e.phase_seconds) p[name] = s;
    phases[e.id] = std::move(p);
  }
  t["experiments"] = std::move(per);
  t["phases"] = std::move(phases);
  return t;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number_text(const Json& q) {
  if (!q.is_object() || !q.contains("value")) return "";
  if (q["value"].is_null()) return q.value("nonfinite", "nan");
  return q["value"].dump();
}

void csv_row(std::string& out, const std::string& experiment, const std::string& kind, const std::string& name,
             const Json& q, const std::string& passed) {
  out += csv_escape(experiment) + "," + kind + "," + csv_escape(name) + "," + number_text(q) + "," +
         csv_escape(q.is_object() ? q.value("method", "") : "") + "," +
         (q.is_object() && q.contains("tolerance") ? q["tolerance"].dump() : "") + "," + passed + "\n";
}

bool is_quantity(const Json& q) {
  if (!q.is_object() || !q.contains("value") || !q.contains("method") || !q.contains("tolerance")) return false;
  if (!q["method"].is_string() || !q["tolerance"].is_number()) return false;
  if (q["value"].is_null()) return q.contains("nonfinite") && q["nonfinite"].is_string();
  return q["value"].is_number();
}

}  // namespace

std::string to_csv(const Report& report) {
  std::string out = "experiment,kind,name,value,method,tolerance,passed\n";
  for (const auto& e : report.experiments) {
    for (const auto& [name, q] : e.values.items()) csv_row(out, e.id, "value", name, q, "");
    for (const auto& c : e.checks) csv_row(out, e.id, "check", c.name, c.observed, c.passed ? "true" : "false");
  }
  return out;
}

std::vector<std::string> validate_report(const Json& body) {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
    return ok;
  };
  if (!need(body.is_object(), "report is not an object")) return problems;
  need(body.contains("schema_version") && body["schema_version"].is_number_integer() &&
           body["schema_version"] == kSchemaVersion,
       "schema_version missing or unsupported");
  need(body.contains("tool_version") && body["tool_version"].is_string(), "tool_version missing");
  need(body.contains("config_hash") && body["config_hash"].is_string() &&
           std::regex_match(body["config_hash"].get<std::string>(), std::regex("fnv1a64:[0-9a-f]{16}")),
       "config_hash missing or malformed");
  need(body.contains("seed") && body["seed"].is_number_unsigned(), "seed missing");
  if (!need(body.contains("experiments") && body["experiments"].is_array(), "experiments array missing"))
    return problems;
  for (const auto& e : body["experiments"]) {
    const std::string id = e.contains("id") && e["id"].is_string() ? e["id"].get<std::string>() : "?";
    const std::string where = "experiment '" + id + "': ";
    need(id != "?", where + "id missing");
    const bool status_ok = e.contains("status") && e["status"].is_string() &&
                           (e["status"] == "ok" || e["status"] == "failed" || e["status"] == "error");
    need(status_ok, where + "status missing or invalid");
    if (status_ok && e["status"] == "error") need(e.contains("error") && e["error"].is_string(), where + "error text missing");
    if (need(e.contains("values") && e["values"].is_object(), where + "values object missing"))
      for (const auto& [name, q] : e["values"].items()) need(is_quantity(q), where + "value '" + name + "' is not tagged");
    if (need(e.contains("tables") && e["tables"].is_object(), where + "tables object missing")) {
      for (const auto& [name, rows] : e["tables"].items()) {
        if (!need(rows.is_array(), where + "table '" + name + "' is not an array")) continue;
        for (const auto& row : rows) {
          if (!need(row.is_object(), where + "table '" + name + "' has a non-object row")) continue;
          for (const auto& [col, cell] : row.items())
            need(cell.is_string() || cell.is_boolean() || is_quantity(cell),
                 where + "table '" + name + "' column '" + col + "' is not tagged");
        }
      }
    }
    if (need(e.contains("checks") && e["checks"].is_array(), where + "checks array missing")) {
      for (const auto& c : e["checks"]) {
        need(c.is_object() && c.contains("name") && c["name"].is_string() && c.contains("passed") &&
                 c["passed"].is_boolean() && c.contains("relation") && c["relation"].is_string(),
             where + "malformed check");
        if (!c.is_object()) continue;
        need(c.contains("observed") && is_quantity(c["observed"]), where + "check observed value is not tagged");
        bool limit_ok = c.contains("limit") && is_quantity(c["limit"]);
        if (!limit_ok && c.contains("limit") && c["limit"].is_array())
          limit_ok = std::all_of(c["limit"].begin(), c["limit"].end(), [](const Json& q) { return is_quantity(q); });
        need(limit_ok, where + "check limit is not tagged");
      }
    }
  }
  return problems;
}

void write_report(const Report& report, const std::filesystem::path& out_dir, bool plots) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::filesystem::path& name, const std::string& text) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("report: cannot write " + (out_dir / name).string());
    out << text;
  };
  write("report.json", to_json(report).dump(2) + "\n");
  write("report.timing.json", timing_json(report).dump(2) + "\n");
  write("report.csv", to_csv(report));
  for (const auto& e : report.experiments) {
    for (const auto& [name, text] : e.csv_files) write(name, text);
    if (plots)
      for (const auto& [name, text] : e.svg_files) write(name, text);
  }
}

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series) {
  const double W = 640, H = 420, left = 70, right = 160, top = 40, bottom = 55;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) { x0 = 0; x1 = 1; }
  if (!(y1 > y0)) { y0 = std::isfinite(y0) ? y0 - 1 : 0; y1 = y0 + 2; }
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  std::ostringstream svg;
  char buf[160];
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  std::snprintf(buf, sizeof(buf), "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, pw, ph);
  svg << buf;
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\">%.3g</text>\n",
                  px(xv), top + ph + 16, xv);
    svg << buf;
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">%.3g</text>\n",
                  left - 6, py(yv) + 4, yv);
    svg << buf;
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << y_label << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) continue;
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(series[s].x[i]), py(series[s].y[i]));
      svg << buf;
    }
    svg << "\"/>\n";
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">", left + pw + 10,
                  top + 16 + 18.0 * s, color);
    svg << buf << series[s].name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cheeger::lab
