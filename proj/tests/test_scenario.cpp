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

#include <string>

#include "doctest.h"
#include "pobs/error.hpp"
#include "pobs/scenario.hpp"

using namespace pobs;

namespace {

const char* kBase =
    "grid.nx = 17\n"
    "grid.nt = 9\n"
    "grid.T = 0.5\n"
    "p = 3\n"
    "obstacle.id = shrinking-hump\n";

std::string input_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInput);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal scenario and defaults") {
  const Scenario sc = parse_scenario(kBase);
  CHECK(sc.dim == 1);
  CHECK(sc.p == 3.0);
  CHECK(sc.levels == 1);
  CHECK(sc.entries.size() == 5);
  const Grid g = scenario_grid(sc);
  CHECK(g.nx(0) == 17);
  CHECK(g.h(0) == doctest::Approx(1.0 / 16));
  CHECK(g.tau() == doctest::Approx(0.5 / 8));
  const auto params = scenario_obstacle_params(sc);
  CHECK(params == obstacle_defaults("shrinking-hump"));
  const SuiteSpec spec = scenario_suite(sc);
  CHECK(spec.checks.empty());
}

TEST_CASE("comments, lists and overrides") {
  const Scenario sc = parse_scenario(std::string(kBase) +
                                     "# comment line\n"
                                     "grid.dim = 2   # trailing\n"
                                     "grid.extent = 0 1, -1 1\n"
                                     "eps_list = 0.2, 0.1 0.05\n"
                                     "obstacle.amplitude = 3\n"
                                     "checks.viscosity = off\n"
                                     "checks.tol_scale = 0.5\n"
                                     "solver.omega = auto\n"
                                     "scenario.name = demo\n");
  CHECK(sc.name == "demo");
  CHECK(sc.dim == 2);
  CHECK(sc.eps_list == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(sc.auto_omega);
  const Grid g = scenario_grid(sc);
  CHECK(g.h(1) == doctest::Approx(2.0 / 16));
  CHECK(scenario_obstacle_params(sc).at("amplitude") == 3.0);
  const SuiteSpec spec = scenario_suite(sc);
  CHECK(spec.checks.size() == check_names().size() - 1);
  CHECK(spec.checks.count("viscosity") == 0);
  CHECK(spec.tol_scale == 0.5);
}

TEST_CASE("missing keys are named") {
  for (const char* key : {"grid.nx", "grid.nt", "grid.T", "p", "obstacle.id"}) {
    std::string text;
    std::string src = kBase;
    std::size_t pos = 0;
    while (pos < src.size()) {
      const std::size_t end = src.find('\n', pos);
      const std::string line = src.substr(pos, end - pos + 1);
      if (line.rfind(std::string(key) + " ", 0) != 0) text += line;
      pos = end + 1;
    }
    const std::string msg = input_error(text);
    CHECK_MESSAGE(msg.find(std::string("'") + key + "'") != std::string::npos, msg);
  }
}

TEST_CASE("errors carry the line number") {
  CHECK(input_error(std::string(kBase) + "bogus = 1\n").find("line 6") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "p = 4\n").find("line 6") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "grid.T = abc\n").find("line 6") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "no equals sign\n").find("line 6") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "obstacle.height = 1\n").find("height") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "checks.nothing = on\n").find("line 6") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "checks.vi = maybe\n").find("line 6") != std::string::npos);
  CHECK(input_error(std::string(kBase) + "solver.omega = 2.5\n").find("line 6") != std::string::npos);
  CHECK_FALSE(input_error(std::string(kBase) + "grid.dim = 3\n").empty());
  CHECK_FALSE(input_error(std::string("p = 1\n") + "grid.nx = 17\ngrid.nt = 9\ngrid.T = 1\nobstacle.id = constant\n").empty());
  CHECK_FALSE(input_error(std::string(kBase) + "eps_list = 0.1 -1\n").empty());
}

TEST_CASE("solver settings reach the config") {
  const Scenario sc = parse_scenario(std::string(kBase) +
                                     "solver.step_tol = 1e-9\nsolver.max_sweeps = 7\neps = 0.01\n");
  const SolverConfig c = scenario_config(sc);
  CHECK(c.step_tol == 1e-9);
  CHECK(c.max_sweeps == 7);
  CHECK(c.params.eps == 0.01);
}

TEST_CASE("unreadable file") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), Error);
}

}
