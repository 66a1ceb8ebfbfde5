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

#ifndef POBS_RUNNER_HPP
#define POBS_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pobs/error.hpp"
#include "pobs/scenario.hpp"

namespace pobs {

struct RunOutput {
  ErrorCode status = ErrorCode::kOk;
  /// Human-readable summary.
  std::string text;
  /// Files written into the output directory, manifest included.
  std::vector<std::string> files;
};

/// Solves level 0 and writes trajectory.csv.
RunOutput cmd_solve(const Scenario& sc, const std::filesystem::path& out_dir);

/// Runs the enabled checks over all refinement levels and writes report.txt
/// and report.kv.
RunOutput cmd_verify(const Scenario& sc, const std::filesystem::path& out_dir);

/// Refinement and eps studies: levels.csv, eps.csv (when eps_list is set)
/// and convergence.txt.
RunOutput cmd_convergence(const Scenario& sc, const std::filesystem::path& out_dir);

RunOutput cmd_ineq(long trials, std::uint64_t seed, bool swap_sides);

/// Version string of the library.
const char* version_string();

}  // namespace pobs

#endif  // POBS_RUNNER_HPP
