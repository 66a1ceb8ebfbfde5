// Copyright 2026 pobstacle developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pobs/ineq.hpp"
#include "pobs/runner.hpp"
#include "pobs/scenario.hpp"
#include "pobs/solver.hpp"
#include "pobs/verification.hpp"

using namespace pobs;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCatalog = {"constant", "affine-inactive", "parabolic-hump",
                                           "shrinking-hump", "traveling-hump"};

Scenario scenario(const std::string& name) {
  return load_scenario((fs::path(POBS_SCENARIO_DIR) / (name + ".scn")).string());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double metric(const CheckRecord& c, const std::string& key) {
  for (const auto& [k, v] : c.metrics) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::kInternal, "missing metric " + c.name + "." + key);
}

std::string level(int l, const char* m) { return "level" + std::to_string(l) + "." + m; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Line {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Line()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Line r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  if (!r.pass) ++failures;
  std::printf("%s %d %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", id, title, r.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Implicit Euler for u_t = u_xx with the 3-point Laplacian, Thomas algorithm.
std::vector<double> heat_oracle(const ScalarField& data) {
  const Grid& g = data.grid();
  const int n = g.nx(0);
  const double r = g.tau() / (g.h(0) * g.h(0));
  std::vector<double> u(g.size());
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = data(0, static_cast<std::size_t>(i));
  for (int k = 1; k < g.nt(); ++k) {
    std::vector<double> a(n, -r), b(n, 1 + 2 * r), c(n, -r), d(n);
    for (int i = 0; i < n; ++i) d[i] = u[g.index(k - 1, static_cast<std::size_t>(i))];
    b[0] = 1.0;
    c[0] = 0.0;
    d[0] = data(k, 0);
    a[n - 1] = 0.0;
    b[n - 1] = 1.0;
    d[n - 1] = data(k, static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) {
      const double m = a[i] / b[i - 1];
      b[i] -= m * c[i - 1];
      d[i] -= m * d[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    for (int i = 0; i < n; ++i) u[g.index(k, static_cast<std::size_t>(i))] = x[i];
  }
  return u;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int main() {
  criterion(1, "vector inequalities", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const InequalityReport rep = run_inequality_suites(1000000, 1);
    const double secs = seconds_since(t0);
    long violations = 0;
    bool all_full = true;
    for (const auto& s : rep.suites) {
      violations += s.violations;
      all_full = all_full && s.samples == 1000000;
    }
    return Line{rep.pass() && all_full && secs < 10.0 && rep.suites.size() == 3,
                fmt("%.0f suites x 1e6 samples, %.0f violations, %.2f s", static_cast<double>(rep.suites.size()),
                    static_cast<double>(violations), secs)};
  });

  criterion(2, "constraint and boundary exactness", [] {
    bool ok = true;
    std::string detail;
    for (const auto& id : kCatalog) {
      const Scenario sc = scenario(id);
      const Grid g = scenario_grid(sc);
      const auto o = make_obstacle(sc.obstacle_id, sc.obstacle_params, g);
      const auto r = solve(g, *o, scenario_config(sc));
      const auto psi = sample_obstacle(*o, g).psi;
      const auto mask = classify_boundary(g);
      double min_gap = INFINITY;
      bool bdry = true;
      for (std::size_t n = 0; n < g.size(); ++n) {
        const double gap = r.u.values()[n] - psi.values()[n];
        min_gap = std::min(min_gap, gap);
        if (mask[n] == NodeClass::kParabolicBoundary) bdry = bdry && gap == 0.0;
      }
      const bool pass = g.nx(0) == 129 && g.nt() == 129 && min_gap >= 0.0 && bdry && r.converged();
      ok = ok && pass;
      detail += id + (pass ? " ok; " : " FAILED; ");
    }
    return Line{ok, detail};
  });

  criterion(3, "oracle equivalence", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario sc = scenario("affine-inactive");
    const Grid g = scenario_grid(sc);
    const auto o = make_obstacle(sc.obstacle_id, sc.obstacle_params, g);
    const auto r = solve(g, *o, scenario_config(sc));
    const auto free = solve_unconstrained(sample_obstacle(*o, g).psi, scenario_config(sc));
    const double d1 = max_diff(r.u.values(), free.u.values());

    const Grid hg = build_grid(1, {{0.0, 1.0}}, {129}, 0.5, 129);
    const auto data = ScalarField::sample(hg, [](const Vec& x, double t) {
      return std::sin(std::numbers::pi * x[0]) + x[0] * (1.0 + t) - 0.5 * t;
    });
    SolverConfig c;
    c.params = {2.0, 0.0};
    c.step_tol = 1e-14;
    const auto heat = solve_unconstrained(data, c);
    const double d2 = max_diff(heat.u.values(), heat_oracle(data));
    const double secs = seconds_since(t0);
    return Line{d1 <= 1e-8 && d2 <= 1e-10 && secs < 5.0 && r.converged() && heat.converged(),
                fmt("affine vs unconstrained %.3g, p=2 vs heat %.3g", d1, d2)};
  });

  // Criteria 4, 5, 6 and 8 share the three-level shrinking-hump suite.
  const Scenario hump = scenario("shrinking-hump");
  SuiteOutcome suite;
  double suite_secs = 0.0;
  {
    SuiteSpec spec = scenario_suite(hump);
    spec.levels = 3;
    const auto t0 = std::chrono::steady_clock::now();
    suite = run_suite(spec);
    suite_secs = seconds_since(t0);
  }
  const bool hump_ok = suite.converged && suite.levels.size() == 3 && suite.levels[0].grid.nx(0) == 129 &&
                       suite.levels[0].grid.nt() == 129;

  criterion(4, "time-derivative formula", [&] {
    const auto& c = *suite.report.find("theorem2");
    const double r0 = metric(c, level(0, "residual"));
    const double r1 = metric(c, level(1, "residual"));
    const double r2 = metric(c, level(2, "residual"));
    const double ut = metric(c, level(2, "ut_norm"));
    const bool ok = hump_ok && r0 / r1 >= 1.3 && r1 / r2 >= 1.3 && r2 <= 0.05 * ut && suite_secs < 300.0;
    return Line{ok, fmt("residuals %.4g %.4g %.4g", r0, r1, r2) +
                        fmt(", ratios %.3f %.3f, finest/|u_t| %.4f, suite %.1f s", r0 / r1, r1 / r2, r2 / ut, suite_secs)};
  });

  criterion(5, "regularization limit", [&] {
    const auto& rows = suite.eps_rows;
    const double floor = 10.0 * suite.step_tol;
    bool ok = hump_ok && rows.size() == 4;
    const std::vector<double> want{0.2, 0.1, 0.05, 0.025};
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ok = ok && rows[i].eps == want[i] && rows[i].converged;
      detail += fmt("eps=%.3g u %.3g grad %.3g; ", rows[i].eps, rows[i].u_diff, rows[i].grad_diff);
      if (i == 0) continue;
      for (auto col : {&EpsRow::u_diff, &EpsRow::grad_diff}) {
        const double prev = rows[i - 1].*col, cur = rows[i].*col;
        if (prev <= floor) continue;
        ok = ok && (cur <= 0.95 * prev || cur <= floor);
      }
    }
    return Line{ok, detail};
  });

  criterion(6, "gradient estimate stabilizes", [&] {
    const auto& c = *suite.report.find("theorem5");
    double l[3], q[3];
    for (int i = 0; i < 3; ++i) {
      l[i] = metric(c, level(i, "lhs"));
      q[i] = metric(c, level(i, "ratio"));
    }
    const auto change = [](double a, double b) { return std::max(a, b) / std::min(a, b); };
    const bool ok = hump_ok && l[0] > 0.0 && change(l[0], l[1]) <= 1.1 && change(l[1], l[2]) <= 1.1 &&
                    std::isfinite(q[0]) && std::isfinite(q[1]) && std::isfinite(q[2]);
    return Line{ok, fmt("lhs %.6g %.6g %.6g", l[0], l[1], l[2]) +
                        fmt(", lhs/rhs %.4g %.4g %.4g", q[0], q[1], q[2])};
  });

  criterion(7, "variational inequality and supersolution slack", [] {
    bool ok = true;
    std::string detail;
    for (const auto& id : kCatalog) {
      SuiteSpec spec = scenario_suite(scenario(id));
      spec.levels = 1;
      spec.checks = {"vi", "supersolution"};
      const auto out = run_suite(spec);
      const Grid& g = out.levels[0].grid;
      double h = 0.0;
      for (int a = 0; a < g.dim(); ++a) h = std::max(h, g.h(a));
      const double tol = 10.0 * (h + g.tau());
      const double vi = metric(*out.report.find("vi"), level(0, "min_slack"));
      const double su = metric(*out.report.find("supersolution"), level(0, "min_slack"));
      const bool pass = g.nx(0) == 129 && g.nt() == 129 && vi >= -tol && su >= -tol && out.converged;
      ok = ok && pass;
      detail += id + fmt(" %.3g/%.3g; ", vi, su);
    }
    return Line{ok, "min slack vi/super: " + detail};
  });

  criterion(8, "weak p-Laplacian identity decay", [&] {
    const auto& c = *suite.report.find("corollary6");
    const double m0 = metric(c, level(0, "mismatch"));
    const double m1 = metric(c, level(1, "mismatch"));
    const double m2 = metric(c, level(2, "mismatch"));
    const bool ok = hump_ok && m0 / m1 >= 1.8 && m1 / m2 >= 1.8;
    return Line{ok, fmt("mismatch %.4g %.4g %.4g", m0, m1, m2) + fmt(", ratios %.3f %.3f", m0 / m1, m1 / m2)};
  });

  criterion(9, "necessary condition on the coincidence set", [] {
    bool ok = true;
    std::string detail;
    for (const auto& id : kCatalog) {
      SuiteSpec spec = scenario_suite(scenario(id));
      spec.levels = 1;
      spec.checks = {"viscosity"};
      const auto out = run_suite(spec);
      const auto& c = *out.report.find("viscosity");
      const double nodes = metric(c, level(0, "nodes"));
      const double mn = metric(c, level(0, "min"));
      const double tol = metric(c, level(0, "tol"));
      const bool pass = nodes == 0.0 || mn >= -tol;
      ok = ok && pass;
      detail += id + (nodes == 0.0 ? std::string(" empty; ") : fmt(" %.3g (tol %.3g); ", mn, tol));
    }
    return Line{ok, detail};
  });

  criterion(10, "deterministic reports", [&] {
    const fs::path base = fs::temp_directory_path() / "pobs_acceptance";
    fs::remove_all(base);
    const auto a = cmd_verify(hump, base / "a");
    const auto b = cmd_verify(hump, base / "b");
    bool same = a.status == b.status;
    for (const char* f : {"report.txt", "report.kv"}) {
      const std::string x = slurp(base / "a" / f);
      same = same && !x.empty() && x == slurp(base / "b" / f);
    }
    return Line{same, same ? "report.txt and report.kv identical" : "reports differ"};
  });

  std::printf("%s\n", failures == 0 ? "acceptance: all criteria pass"
                                    : ("acceptance: " + std::to_string(failures) + " failing").c_str());
  return failures == 0 ? 0 : 1;
}
