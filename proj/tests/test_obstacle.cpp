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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pobs/error.hpp"
#include "pobs/obstacle.hpp"
#include "pobs/pflux.hpp"

using namespace pobs;

namespace {

class WrongTimeDerivative final : public Obstacle {
 public:
  std::string id() const override { return "wrong"; }
  double psi(const Vec& x, double t) const override { return x[0] * t; }
  double psi_t(const Vec&, double) const override { return 0.0; }
  Vec grad(const Vec&, double t) const override { return {t, 0.0}; }
  Vec grad_t(const Vec&, double) const override { return {1.0, 0.0}; }
  Mat hess(const Vec&, double) const override { return {0.0, 0.0, 0.0, 0.0}; }
};

}  // namespace

TEST_SUITE("obstacle") {

TEST_CASE("catalog and defaults") {
  const auto& cat = obstacle_catalog();
  CHECK(cat.size() == 5);
  CHECK(obstacle_defaults("constant").at("value") == 0.0);
  CHECK(obstacle_defaults("shrinking-hump").at("t0") == 0.5);
  CHECK(obstacle_defaults("traveling-hump").at("velocity") == 0.5);
  CHECK_THROWS_AS(obstacle_defaults("cone"), Error);
  const Grid g = build_grid(1, {{0.0, 1.0}}, {9}, 1.0, 5);
  CHECK_THROWS_AS(make_obstacle("cone", {}, g), Error);
  CHECK_THROWS_AS(make_obstacle("constant", {{"height", 1.0}}, g), Error);
  CHECK_THROWS_AS(make_obstacle("affine-inactive", {{"layer", 0.0}}, g), Error);
  for (const auto& id : cat) CHECK(make_obstacle(id, {}, g)->id() == id);
}

TEST_CASE("catalog derivatives agree with finite differences") {
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, {{-0.5, 1.5}}, {9}, 0.8, 5);
    for (const auto& id : obstacle_catalog()) {
      const auto o = make_obstacle(id, {}, g);
      CHECK_NOTHROW(check_obstacle_consistency(*o, g, 99, 200));
    }
  }
}

TEST_CASE("consistency check rejects wrong derivatives") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {9}, 1.0, 5);
  CHECK_THROWS_AS(check_obstacle_consistency(WrongTimeDerivative{}, g), Error);
}

TEST_CASE("hump values") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {9}, 1.0, 5);
  const auto par = make_obstacle("parabolic-hump", {}, g);
  CHECK(par->psi({0.5, 0.0}, 0.3) == 1.0);
  CHECK(par->psi({0.7, 0.0}, 0.0) == doctest::Approx(1.0 - 10.0 * 0.04));
  CHECK(par->psi_t({0.7, 0.0}, 0.2) == 0.0);

  const auto shr = make_obstacle("shrinking-hump", {{"amplitude", 2.0}}, g);
  CHECK(shr->psi({0.5, 0.0}, 0.0) == doctest::Approx(1.0));
  CHECK(shr->psi({0.5, 0.0}, 0.2) == doctest::Approx(0.6));
  CHECK(shr->psi({0.6, 0.0}, 0.7) == 0.0);
  CHECK(shr->psi_t({0.5, 0.0}, 0.2) == doctest::Approx(-2.0));

  const auto tr = make_obstacle("traveling-hump", {}, g);
  CHECK(tr->psi({0.75, 0.0}, 0.5) == doctest::Approx(1.0));
  CHECK(tr->psi_t({0.75, 0.0}, 0.5) == doctest::Approx(0.0));
  // ψ_t = −v ψ_x for a rigid translation.
  CHECK(tr->psi_t({0.6, 0.0}, 0.1) == doctest::Approx(-0.5 * tr->grad({0.6, 0.0}, 0.1)[0]));
}

TEST_CASE("affine-inactive obstacle") {
  const Grid g = build_grid(2, {{0.0, 1.0}, {0.0, 2.0}}, {9, 9}, 1.0, 5);
  const auto o = make_obstacle("affine-inactive", {{"offset", 0.5}, {"slope", 2.0}, {"slope_y", -1.0}}, g);
  const auto ell = [](const Vec& x) { return 0.5 + 2.0 * x[0] - x[1]; };
  // Equal to the affine function on Γ_T, well below it inside.
  CHECK(o->psi({0.3, 0.8}, 0.0) == doctest::Approx(ell({0.3, 0.8})));
  CHECK(o->psi({0.0, 0.8}, 0.7) == doctest::Approx(ell({0.0, 0.8})));
  CHECK(o->psi({0.3, 2.0}, 0.7) == doctest::Approx(ell({0.3, 2.0})));
  CHECK(o->psi({0.5, 1.0}, 0.5) == doctest::Approx(ell({0.5, 1.0}) - 1.0).epsilon(1e-9));
}

TEST_CASE("constant obstacle") {
  const Grid g = build_grid(2, {{0.0, 1.0}}, {5}, 1.0, 3);
  const auto o = make_obstacle("constant", {{"value", -2.5}}, g);
  const auto smp = sample_obstacle(*o, g);
  for (double v : smp.psi.values()) CHECK(v == -2.5);
  for (double v : smp.psi_t.values()) CHECK(v == 0.0);
  CHECK(max_hessian_norm(*o, g) == 0.0);
  const ScalarField lap = exact_p_laplacian(*o, g, 3.0);
  for (double v : lap.values()) CHECK(v == 0.0);
}

TEST_CASE("sampled derivatives match the callbacks") {
  const Grid g = build_grid(2, {{0.0, 1.0}}, {7}, 0.5, 4);
  const auto o = make_obstacle("traveling-hump", {}, g);
  const auto smp = sample_obstacle(*o, g);
  const ScalarField lap = exact_p_laplacian(*o, g, 3.0);
  for (int k = 0; k < g.nt(); ++k) {
    for (std::size_t s = 0; s < g.space_size(); ++s) {
      const Vec x = g.point(s);
      const double t = g.t(k);
      CHECK(smp.psi(k, s) == o->psi(x, t));
      CHECK(smp.grad(k, s)[1] == o->grad(x, t)[1]);
      CHECK(lap(k, s) == p_laplacian_exact(2, o->grad(x, t), o->hess(x, t), 3.0));
    }
  }
  // Hessian of the hump is −2·A·k·I.
  CHECK(max_hessian_norm(*o, g) == doctest::Approx(20.0 * std::sqrt(2.0)));
}

}
