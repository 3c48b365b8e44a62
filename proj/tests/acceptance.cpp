// Runs the default suite twice and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cheeger_lab/config.hpp"
#include "cheeger_lab/experiments.hpp"
#include "cheeger_lab/report.hpp"

using namespace cheeger::lab;

namespace {

struct Line {
  Line(int i, std::string n) : id(i), name(std::move(n)) {}
  int id;
  std::string name;
  bool passed = true;
  std::vector<std::string> notes;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string value_text(const Json& q) {
  if (!q.is_object() || !q.contains("value")) return q.dump();
  if (q["value"].is_null()) return q.value("nonfinite", "nan");
  return q["value"].is_number_float() ? fmt(q["value"].get<double>()) : q["value"].dump();
}

// Folds a named check of an experiment into a criterion line.
void need_check(Line& line, const Report& r, const std::string& exp, const std::string& check) {
  const ExperimentResult* e = r.find(exp);
  if (!e) {
    line.passed = false;
    line.notes.push_back(exp + " missing");
    return;
  }
  if (e->status == "error") {
    line.passed = false;
    line.notes.push_back(exp + " error: " + e->error);
    return;
  }
  const Check* c = e->find_check(check);
  if (!c) {
    line.passed = false;
    line.notes.push_back(check + " missing");
    return;
  }
  line.passed = line.passed && c->passed;
  std::string limit;
  if (c->limit.is_array())
    limit = "[" + value_text(c->limit[0]) + ", " + value_text(c->limit[1]) + "]";
  else
    limit = value_text(c->limit);
  line.notes.push_back(check + "=" + value_text(c->observed) + " " + c->relation + " " + limit);
}

void need_runtime(Line& line, double seconds, double limit, const std::string& what) {
  const bool ok = std::isfinite(seconds) && seconds < limit;
  line.passed = line.passed && ok;
  line.notes.push_back(what + " " + fmt(seconds) + " s < " + fmt(limit) + " s");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run of the default experiment suite"};
  std::vector<int> allow_fail;
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--allow-fail", allow_fail, "criteria whose failure does not fail the run")->delimiter(',');
  app.add_option("--seed", seed, "suite seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

  ExperimentConfig cfg = default_config();
  cfg.seed = seed;
  cfg.threads = threads;

  const auto t0 = std::chrono::steady_clock::now();
  const Report first = run_suite(cfg);
  const Report second = run_suite(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Report& r = first;
  std::vector<Line> lines;

  Line c1{1, "riccati oracle equivalence"};
  need_check(c1, r, "riccati", "oracle_abs_error");
  if (const auto* e = r.find("riccati")) {
    need_runtime(c1, e->phase("oracle"), 30.0, "oracle phase");
    if (e->values.contains("oracle.max_rel_error"))
      c1.notes.push_back("max_rel_error=" + value_text(e->values["oracle.max_rel_error"]));
  }
  lines.push_back(c1);

  Line c2{2, "constant solution exactness"};
  need_check(c2, r, "riccati", "constant_closed_form");
  lines.push_back(c2);

  Line c3{3, "cheeger lower bound on random graphs"};
  need_check(c3, r, "cheeger-bound", "cheeger_lower_bound");
  if (const auto* e = r.find("cheeger-bound")) need_runtime(c3, e->seconds, 60.0, "runtime");
  lines.push_back(c3);

  Line c4{4, "sphere continuum checks"};
  for (const char* c : {"sphere_lambda1", "sphere_h_sweep", "sphere_equator_f0"}) need_check(c4, r, "spectral", c);
  if (const auto* e = r.find("spectral")) need_runtime(c4, e->phase("sphere"), 20.0, "sphere phase");
  lines.push_back(c4);

  Line c5{5, "flat torus continuum checks"};
  need_check(c5, r, "spectral", "torus_lambda1");
  need_check(c5, r, "spectral", "torus_h_sweep");
  need_check(c5, r, "tube", "torus_growth");
  lines.push_back(c5);

  Line c6{6, "local ratio positivity and stability"};
  for (const char* c : {"samples_per_seed", "ratios_positive", "min_ratio_stable"}) need_check(c6, r, "lemma31", c);
  lines.push_back(c6);

  Line c7{7, "buser verification on the dumbbell family"};
  need_check(c7, r, "buser", "variational");
  need_check(c7, r, "buser", "c_emp_spread");
  if (const auto* e = r.find("buser")) need_runtime(c7, e->phase("family"), 180.0, "family phase");
  lines.push_back(c7);

  Line c8{8, "boundary ratio bound on disk and hemisphere"};
  for (const char* c : {"disk_bound", "hemisphere_bound", "disk_C0", "hemisphere_C0"}) need_check(c8, r, "prop25", c);
  lines.push_back(c8);

  Line c9{9, "determinism of the default suite"};
  const std::string a = to_json(first).dump(), b = to_json(second).dump();
  c9.passed = a == b && to_csv(first) == to_csv(second);
  c9.notes.push_back(std::string(a == b ? "identical" : "different") + " report bodies (" + std::to_string(a.size()) +
                     " bytes)");
  const auto problems = validate_report(to_json(first));
  if (!problems.empty()) {
    c9.passed = false;
    c9.notes.push_back("schema: " + problems.front());
  }
  lines.push_back(c9);

  const std::set<int> allowed(allow_fail.begin(), allow_fail.end());
  bool ok = true;
  for (const Line& l : lines) {
    std::ostringstream out;
    out << (l.passed ? "[PASS] " : "[FAIL] ") << l.id << ' ' << l.name << ':';
    for (std::size_t i = 0; i < l.notes.size(); ++i) out << (i ? "; " : " ") << l.notes[i];
    if (!l.passed && allowed.count(l.id)) out << " (allowed)";
    std::cout << out.str() << '\n';
    if (!l.passed && !allowed.count(l.id)) ok = false;
  }
  std::cout << "suite runs: " << fmt(first.total_seconds) << " s, " << fmt(second.total_seconds) << " s; wall "
            << fmt(wall) << " s\n";
  return ok ? 0 : 1;
}
