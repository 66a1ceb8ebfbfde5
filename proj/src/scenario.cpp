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

#include "pobs/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pobs/error.hpp"

namespace pobs {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  throw_input("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double to_double(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    fail_at(line, "'" + key + "' expects a number, got '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, int line, const std::string& key) {
  int v = 0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    fail_at(line, "'" + key + "' expects an integer, got '" + s + "'");
  }
  return v;
}

std::vector<double> to_doubles(std::string_view v, int line, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(item, line, key));
  if (out.empty()) fail_at(line, "'" + key + "' needs at least one value");
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::map<std::string, int> seen;
  std::vector<std::pair<std::string, int>> param_lines;
  std::vector<double> extent_values;
  int extent_line = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_at(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view raw = trim(line.substr(eq + 1));
    const std::string value(raw);
    if (key.empty()) fail_at(line_no, "missing key");
    if (value.empty()) fail_at(line_no, "missing value for '" + key + "'");
    if (seen.count(key)) {
      fail_at(line_no, "duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    sc.entries.emplace_back(key, value);

    if (key == "scenario.name") {
      sc.name = value;
    } else if (key == "grid.dim") {
      sc.dim = to_int(value, line_no, key);
      if (sc.dim != 1 && sc.dim != 2) fail_at(line_no, "grid.dim must be 1 or 2");
    } else if (key == "grid.extent") {
      extent_values = to_doubles(raw, line_no, key);
      extent_line = line_no;
    } else if (key == "grid.nx") {
      for (const auto& item : split_list(raw)) sc.nx.push_back(to_int(item, line_no, key));
    } else if (key == "grid.T") {
      sc.T = to_double(value, line_no, key);
    } else if (key == "grid.nt") {
      sc.nt = to_int(value, line_no, key);
    } else if (key == "p") {
      sc.p = to_double(value, line_no, key);
      if (!(sc.p >= 2.0)) fail_at(line_no, "p must be at least 2");
    } else if (key == "eps") {
      sc.eps = to_double(value, line_no, key);
      if (!(sc.eps >= 0.0)) fail_at(line_no, "eps must be nonnegative");
    } else if (key == "eps_list") {
      sc.eps_list = to_doubles(raw, line_no, key);
      for (double e : sc.eps_list) {
        if (!(e >= 0.0)) fail_at(line_no, "eps_list values must be nonnegative");
      }
    } else if (key == "obstacle.id") {
      const auto& cat = obstacle_catalog();
      if (std::find(cat.begin(), cat.end(), value) == cat.end()) {
        fail_at(line_no, "unknown obstacle '" + value + "'");
      }
      sc.obstacle_id = value;
    } else if (key.rfind("obstacle.", 0) == 0) {
      sc.obstacle_params[key.substr(9)] = to_double(value, line_no, key);
      param_lines.emplace_back(key.substr(9), line_no);
    } else if (key == "solver.step_tol") {
      sc.step_tol = to_double(value, line_no, key);
      if (!(sc.step_tol > 0.0)) fail_at(line_no, "solver.step_tol must be positive");
    } else if (key == "solver.max_sweeps") {
      sc.max_sweeps = to_int(value, line_no, key);
      if (sc.max_sweeps < 1) fail_at(line_no, "solver.max_sweeps must be positive");
    } else if (key == "solver.omega") {
      if (value == "auto") {
        sc.auto_omega = true;
      } else {
        sc.omega = to_double(value, line_no, key);
        if (!(sc.omega > 0.0 && sc.omega < 2.0)) fail_at(line_no, "solver.omega must lie in (0, 2)");
      }
    } else if (key == "checks.tol_scale") {
      sc.tol_scale = to_double(value, line_no, key);
      if (!(sc.tol_scale >= 0.0)) fail_at(line_no, "checks.tol_scale must be nonnegative");
    } else if (key.rfind("checks.", 0) == 0) {
      const std::string name = key.substr(7);
      const auto& names = check_names();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        fail_at(line_no, "unknown key '" + key + "'");
      }
      if (value != "on" && value != "off") fail_at(line_no, "'" + key + "' expects on or off");
      sc.checks[name] = value == "on";
    } else if (key == "refine.levels") {
      sc.levels = to_int(value, line_no, key);
      if (sc.levels < 1) fail_at(line_no, "refine.levels must be at least 1");
    } else if (key == "cutoff.margin") {
      sc.cutoff_margin = to_double(value, line_no, key);
      if (!(sc.cutoff_margin > 0.0)) fail_at(line_no, "cutoff.margin must be positive");
    } else {
      fail_at(line_no, "unknown key '" + key + "'");
    }
  }

  for (const char* req : {"grid.nx", "grid.nt", "grid.T", "p", "obstacle.id"}) {
    if (!seen.count(req)) throw_input(std::string("missing required key '") + req + "'");
  }
  if (sc.nx.size() != 1 && sc.nx.size() != static_cast<std::size_t>(sc.dim)) {
    fail_at(seen["grid.nx"], "grid.nx needs 1 or " + std::to_string(sc.dim) + " values");
  }
  if (sc.nx.size() == 1 && sc.dim == 2) sc.nx.push_back(sc.nx[0]);
  if (extent_line > 0) {
    if (extent_values.size() != 2 * static_cast<std::size_t>(sc.dim)) {
      fail_at(extent_line, "grid.extent needs " + std::to_string(2 * sc.dim) + " values (lo hi per axis)");
    }
    for (int a = 0; a < sc.dim; ++a) sc.extent.push_back({extent_values[2 * a], extent_values[2 * a + 1]});
  } else {
    sc.extent.assign(static_cast<std::size_t>(sc.dim), Interval{0.0, 1.0});
  }
  const ObstacleParams defaults = obstacle_defaults(sc.obstacle_id);
  for (const auto& [name, line] : param_lines) {
    if (!defaults.count(name)) {
      fail_at(line, "obstacle '" + sc.obstacle_id + "' has no parameter '" + name + "'");
    }
  }
  // Surface grid errors now, with the scenario as context.
  try {
    scenario_grid(sc);
  } catch (const Error& e) {
    throw_input(std::string("invalid grid: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

Grid scenario_grid(const Scenario& sc) {
  return build_grid(sc.dim, sc.extent, sc.nx, sc.T, sc.nt);
}

SolverConfig scenario_config(const Scenario& sc) {
  SolverConfig c;
  c.params = {sc.p, sc.eps};
  c.step_tol = sc.step_tol;
  c.max_sweeps = sc.max_sweeps;
  c.omega = sc.omega;
  c.auto_omega = sc.auto_omega;
  return c;
}

ObstacleParams scenario_obstacle_params(const Scenario& sc) {
  ObstacleParams out = obstacle_defaults(sc.obstacle_id);
  for (const auto& [k, v] : sc.obstacle_params) out[k] = v;
  return out;
}

SuiteSpec scenario_suite(const Scenario& sc) {
  SuiteSpec s;
  s.name = sc.name;
  s.grid = scenario_grid(sc);
  s.levels = sc.levels;
  s.obstacle_id = sc.obstacle_id;
  s.obstacle_params = sc.obstacle_params;
  s.config = scenario_config(sc);
  s.eps_list = sc.eps_list;
  s.cutoff_margin = sc.cutoff_margin;
  s.tol_scale = sc.tol_scale;
  bool any_off = false;
  for (const auto& [name, on] : sc.checks) any_off = any_off || !on;
  if (any_off) {
    for (const auto& name : check_names()) {
      const auto it = sc.checks.find(name);
      if (it == sc.checks.end() || it->second) s.checks.insert(name);
    }
  }
  return s;
}

}  // namespace pobs
