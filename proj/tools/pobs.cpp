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

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "pobs/pobs.h"

namespace {

int report(pobs_status st, pobs_run* run) {
  if (run != nullptr) {
    std::fputs(pobs_run_text(run), stdout);
    pobs_run_free(run);
  }
  if (st == POBS_ERR_INPUT || st == POBS_ERR_INTERNAL) {
    std::fprintf(stderr, "error: %s\n", pobs_last_error());
  }
  return static_cast<int>(st);
}

using Command = pobs_status (*)(const pobs_scenario*, const char*, pobs_run**);

int run_scenario(Command cmd, const std::string& path, const std::string& out_dir) {
  pobs_scenario* sc = nullptr;
  const pobs_status st = pobs_scenario_load(path.c_str(), &sc);
  if (st != POBS_OK) return report(st, nullptr);
  pobs_run* run = nullptr;
  const pobs_status rs = cmd(sc, out_dir.c_str(), &run);
  pobs_scenario_free(sc);
  return report(rs, run);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obstacle problem solver and verification runner"};
  app.set_version_flag("--version", std::string(pobs_version()));
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir = "out";
  long trials = 1000000;
  std::uint64_t seed = 1;
  bool swap = false;

  const auto scenario_cmd = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    return sub;
  };
  CLI::App* solve = scenario_cmd("solve", "Solve a scenario and write the trajectory");
  CLI::App* verify = scenario_cmd("verify", "Run the verification checks of a scenario");
  CLI::App* conv = scenario_cmd("convergence", "Refinement and eps studies");
  CLI::App* ineq = app.add_subcommand("ineq", "Monte Carlo vector inequality suites");
  ineq->add_option("--trials", trials, "Samples per suite")->capture_default_str()->check(CLI::PositiveNumber);
  ineq->add_option("--seed", seed, "Random seed")->capture_default_str();
  ineq->add_flag("--debug-swap", swap, "Swap the two sides of every inequality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(POBS_ERR_INPUT);
  }

  if (*solve) return run_scenario(pobs_cmd_solve, scenario, out_dir);
  if (*verify) return run_scenario(pobs_cmd_verify, scenario, out_dir);
  if (*conv) return run_scenario(pobs_cmd_convergence, scenario, out_dir);
  pobs_run* run = nullptr;
  const pobs_status st = pobs_cmd_ineq(trials, seed, swap ? 1 : 0, &run);
  return report(st, run);
}
