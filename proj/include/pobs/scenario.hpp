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

#ifndef POBS_SCENARIO_HPP
#define POBS_SCENARIO_HPP

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pobs/geometry.hpp"
#include "pobs/obstacle.hpp"
#include "pobs/solver.hpp"
#include "pobs/verification.hpp"

namespace pobs {

/// A parsed scenario file.
///
/// Format: one `key = value` per line, `#` starts a comment. Lists
/// (grid.extent, grid.nx, eps_list) are separated by spaces or commas.
struct Scenario {
  std::string name = "scenario";
  int dim = 1;
  std::vector<Interval> extent;  ///< defaults to [0, 1] per axis
  std::vector<int> nx;           ///< one entry (used for every axis) or dim entries
  double T = 0.0;
  int nt = 0;
  double p = 2.0;
  double eps = 0.0;
  std::vector<double> eps_list;
  std::string obstacle_id;
  ObstacleParams obstacle_params;  ///< explicit overrides only
  double step_tol = 0.0;           ///< 0 selects the solver default
  int max_sweeps = 0;              ///< 0 selects the solver default
  double omega = 1.0;
  bool auto_omega = false;
  std::map<std::string, bool> checks;
  double tol_scale = 1.0;
  int levels = 1;
  double cutoff_margin = 0.1;

  /// Key/value pairs in file order, as written.
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Parses scenario text; errors are Error(kInput) naming the line number or
/// the missing key.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// Level-0 grid of the scenario.
Grid scenario_grid(const Scenario& sc);
SolverConfig scenario_config(const Scenario& sc);
SuiteSpec scenario_suite(const Scenario& sc);

/// Obstacle parameters with catalog defaults filled in.
ObstacleParams scenario_obstacle_params(const Scenario& sc);

}  // namespace pobs

#endif  // POBS_SCENARIO_HPP
