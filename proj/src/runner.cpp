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

#include "pobs/runner.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pobs/fields.hpp"
#include "pobs/ineq.hpp"
#include "pobs/obstacle.hpp"
#include "pobs/solver.hpp"
#include "pobs/verification.hpp"

#ifndef POBS_VERSION
#define POBS_VERSION "0.0.0"
#endif

namespace pobs {

namespace fs = std::filesystem;

const char* version_string() { return POBS_VERSION; }

namespace {

const char* status_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kOk:
      return "ok";
    case ErrorCode::kInput:
      return "input_error";
    case ErrorCode::kNonConverged:
      return "not_converged";
    case ErrorCode::kVerificationFailed:
      return "verification_failed";
    case ErrorCode::kInternal:
      return "internal_error";
  }
  return "unknown";
}

// manifest.txt: written before any data file and rewritten on completion.
class Manifest {
 public:
  Manifest(fs::path dir, std::string command, const Scenario& sc)
      : dir_(std::move(dir)), command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw_input("cannot create output directory '" + dir_.string() + "': " + ec.message());
    std::ostringstream os;
    os << "tool = pobstacle " << version_string() << '\n';
    os << "command = " << command_ << '\n';
    for (const auto& [k, v] : sc.entries) os << "scenario." << k << " = " << v << '\n';
    const Grid grid = scenario_grid(sc);
    const auto obstacle = make_obstacle(sc.obstacle_id, sc.obstacle_params, grid);
    const SolverConfig rc =
        resolve_config(scenario_config(sc), grid, sample_obstacle(*obstacle, grid).psi.max_abs());
    for (const auto& [k, v] : scenario_obstacle_params(sc)) {
      os << "resolved.obstacle." << k << " = " << format_double(v) << '\n';
    }
    os << "resolved.step_tol = " << format_double(rc.step_tol) << '\n';
    os << "resolved.max_sweeps = " << rc.max_sweeps << '\n';
    os << "resolved.omega = " << format_double(rc.omega) << '\n';
    os << "resolved.refine.levels = " << sc.levels << '\n';
    os << "resolved.cutoff.margin = " << format_double(sc.cutoff_margin) << '\n';
    os << "resolved.checks.tol_scale = " << format_double(sc.tol_scale) << '\n';
    head_ = os.str();
    flush("running");
  }

  void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::kInternal, "cannot write '" + (dir_ / name).string() + "'");
    files_.push_back(name);
  }

  RunOutput finish(ErrorCode status, std::string text) {
    flush(status_name(status));
    RunOutput out;
    out.status = status;
    out.text = std::move(text);
    out.files = files_;
    out.files.push_back("manifest.txt");
    return out;
  }

 private:
  void flush(const char* status) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream out(dir_ / "manifest.txt", std::ios::binary);
    out << head_;
    out << "status = " << status << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", secs);
    out << "timing.seconds = " << buf << '\n';
    for (const auto& f : files_) out << "file = " << f << '\n';
    out << "file = manifest.txt\n";
    if (!out) throw Error(ErrorCode::kInternal, "cannot write manifest in '" + dir_.string() + "'");
  }

  fs::path dir_;
  std::string command_;
  std::string head_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_;
};

std::string csv_of(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace

RunOutput cmd_solve(const Scenario& sc, const fs::path& out_dir) {
  Manifest manifest(out_dir, "solve", sc);
  const Grid grid = scenario_grid(sc);
  const auto obstacle = make_obstacle(sc.obstacle_id, sc.obstacle_params, grid);
  const SolveResult r = solve(grid, *obstacle, scenario_config(sc));
  std::ostringstream csv;
  write_trajectory_csv(csv, r, sample_obstacle(*obstacle, grid).psi);
  manifest.write_file("trajectory.csv", csv.str());

  std::ostringstream text;
  long sweeps = 0;
  for (const auto& s : r.steps) sweeps += s.sweeps;
  text << "solved " << sc.name << ": " << grid.size() << " nodes, " << r.steps.size()
       << " steps, " << sweeps << " sweeps\n";
  ErrorCode status = ErrorCode::kOk;
  if (!r.converged()) {
    status = ErrorCode::kNonConverged;
    text << "not converged at time level " << r.first_unconverged_level() << '\n';
  }
  return manifest.finish(status, text.str());
}

RunOutput cmd_verify(const Scenario& sc, const fs::path& out_dir) {
  Manifest manifest(out_dir, "verify", sc);
  const SuiteOutcome res = run_suite(scenario_suite(sc));
  const std::string text = res.report.to_text();
  manifest.write_file("report.txt", text);
  manifest.write_file("report.kv", res.report.to_kv());
  ErrorCode status = ErrorCode::kOk;
  if (!res.converged) {
    status = ErrorCode::kNonConverged;
  } else if (!res.report.all_pass()) {
    status = ErrorCode::kVerificationFailed;
  }
  return manifest.finish(status, text);
}

RunOutput cmd_convergence(const Scenario& sc, const fs::path& out_dir) {
  Manifest manifest(out_dir, "convergence", sc);
  SuiteSpec spec = scenario_suite(sc);
  spec.checks = {"theorem2", "theorem5"};
  if (!sc.eps_list.empty()) spec.checks.insert("eps");
  const SuiteOutcome res = run_suite(spec);

  std::vector<std::vector<double>> level_rows;
  for (std::size_t l = 0; l < res.levels.size(); ++l) {
    const auto& s = res.levels[l];
    level_rows.push_back({static_cast<double>(l), static_cast<double>(s.grid.nx(0)),
                          static_cast<double>(s.grid.nt()), s.grid.h(0), s.grid.tau(),
                          s.theorem2_residual, s.theorem5_lhs});
  }
  manifest.write_file("levels.csv", csv_of({"level", "nx", "nt", "h", "tau", "theorem2_residual",
                                            "theorem5_lhs"},
                                           level_rows));
  bool pass = true;
  std::ostringstream text;
  const double floor = 100.0 * res.step_tol * sc.tol_scale;
  for (std::size_t l = 1; l < res.levels.size(); ++l) {
    const double a = res.levels[l - 1].theorem2_residual;
    const double b = res.levels[l].theorem2_residual;
    const bool ok = b <= floor || 1.3 * b <= a;
    text << (ok ? "PASS" : "FAIL") << " theorem2 ratio level" << l - 1 << "/level" << l << " = "
         << format_double(b > 0.0 ? a / b : 0.0) << '\n';
    pass = pass && ok;
    const double la = res.levels[l - 1].theorem5_lhs;
    const double lb = res.levels[l].theorem5_lhs;
    const double change = (la <= floor && lb <= floor) ? 1.0 : std::max(la, lb) / std::min(la, lb);
    const bool ok5 = change <= 1.0 + 0.1 * sc.tol_scale;
    text << (ok5 ? "PASS" : "FAIL") << " theorem5 lhs change level" << l - 1 << "/level" << l
         << " = " << format_double(change) << '\n';
    pass = pass && ok5;
  }
  if (!sc.eps_list.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.eps_rows) rows.push_back({r.eps, r.u_diff, r.grad_diff});
    manifest.write_file("eps.csv", csv_of({"eps", "u_diff", "grad_diff"}, rows));
    const bool ok = res.report.find("eps")->pass;
    text << (ok ? "PASS" : "FAIL") << " eps study monotone over " << rows.size() << " rows\n";
    pass = pass && ok;
  }
  manifest.write_file("convergence.txt", text.str());
  ErrorCode status = ErrorCode::kOk;
  if (!res.converged) {
    status = ErrorCode::kNonConverged;
  } else if (!pass) {
    status = ErrorCode::kVerificationFailed;
  }
  return manifest.finish(status, text.str());
}

RunOutput cmd_ineq(long trials, std::uint64_t seed, bool swap_sides) {
  const InequalityReport rep = run_inequality_suites(trials, seed, swap_sides);
  RunOutput out;
  out.text = rep.to_text();
  out.status = rep.pass() ? ErrorCode::kOk : ErrorCode::kVerificationFailed;
  return out;
}

}  // namespace pobs
