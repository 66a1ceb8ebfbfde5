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
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pobs/error.hpp"
#include "pobs/solver.hpp"

using namespace pobs;

namespace {

SolverConfig config(double p, double eps = 0.0) {
  SolverConfig c;
  c.params = {p, eps};
  return c;
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

TEST_SUITE("solver") {

TEST_CASE("zero data stays zero") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {17}, 0.1, 3);
  const std::vector<double> z(g.space_size(), 0.0);
  const auto out = step_vi(z, z, z, resolve_config(config(3.0), g, 0.0), g);
  for (double v : out.v) CHECK(v == 0.0);
  CHECK(out.stats.converged);
}

TEST_CASE("affine data is a fixed point with an inactive obstacle") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {21}, 0.1, 3);
  std::vector<double> prev(g.space_size()), lower(g.space_size(), -1.0);
  for (std::size_t s = 0; s < prev.size(); ++s) prev[s] = 3.0 * g.point(s)[0];
  const auto out = step_vi(prev, lower, prev, resolve_config(config(3.0), g, 3.0), g);
  CHECK(out.stats.converged);
  CHECK(max_diff(out.v, prev) <= 1e-12);
}

TEST_CASE("concave hump obstacle stays in contact at its crest") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {2049}, 1e-3, 2);
  std::vector<double> psi(g.space_size());
  for (std::size_t s = 0; s < psi.size(); ++s) {
    const double x = g.point(s)[0];
    psi[s] = 1.0 - 10.0 * (x - 0.5) * (x - 0.5);
  }
  const auto out = step_vi(psi, psi, psi, resolve_config(config(3.0), g, 1.5), g);
  CHECK(out.stats.converged);
  CHECK(out.v[1024] == psi[1024]);
  long active = 0;
  for (std::size_t s = 0; s < psi.size(); ++s) {
    CHECK(out.v[s] >= psi[s]);
    active += out.v[s] == psi[s];
  }
  CHECK(active > 0);
}

TEST_CASE("constant obstacle gives a constant solution") {
  const Grid g = build_grid(2, {{0.0, 1.0}}, {9}, 0.5, 6);
  const auto o = make_obstacle("constant", {{"value", 0.75}}, g);
  const auto r = solve(g, *o, config(3.0));
  CHECK(r.converged());
  for (double v : r.u.values()) CHECK(v == 0.75);
}

TEST_CASE("p = 2 unconstrained solve matches the implicit heat oracle") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {33}, 0.2, 21);
  const auto data = ScalarField::sample(g, [](const Vec& x, double t) {
    return std::sin(std::numbers::pi * x[0]) + x[0] * (1.0 + t) - 0.5 * t;
  });
  SolverConfig c = config(2.0);
  c.step_tol = 1e-14;
  const auto r = solve_unconstrained(data, c);
  CHECK(r.converged());
  CHECK(max_diff(r.u.values(), heat_oracle(data)) <= 1e-10);
}

TEST_CASE("inactive obstacle matches the unconstrained solve") {
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, {{0.0, 1.0}}, {dim == 1 ? 65 : 17}, 0.3, 17);
    const auto o = make_obstacle("affine-inactive", {}, g);
    const auto r = solve(g, *o, config(3.0));
    const auto psi = sample_obstacle(*o, g).psi;
    const auto free = solve_unconstrained(psi, config(3.0));
    CHECK(r.converged());
    CHECK(max_diff(r.u.values(), free.u.values()) <= 1e-8);
    // u is the affine boundary trace for t > 0.
    for (std::size_t s = 0; s < g.space_size(); ++s) {
      const Vec x = g.point(s);
      CHECK(std::abs(r.u(g.nt() - 1, s) - (x[0])) <= 1e-8);
    }
  }
}

TEST_CASE("constraint, boundary and maximum principle") {
  for (const char* id : {"shrinking-hump", "traveling-hump", "parabolic-hump"}) {
    const Grid g = build_grid(1, {{0.0, 1.0}}, {65}, 0.5, 33);
    const auto o = make_obstacle(id, {}, g);
    const auto r = solve(g, *o, config(3.0));
    const auto psi = sample_obstacle(*o, g).psi;
    const auto mask = classify_boundary(g);
    double psi_max = -1e300, psi_min_bdry = 1e300;
    for (std::size_t n = 0; n < g.size(); ++n) {
      psi_max = std::max(psi_max, psi.values()[n]);
      if (mask[n] == NodeClass::kParabolicBoundary) psi_min_bdry = std::min(psi_min_bdry, psi.values()[n]);
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double u = r.u.values()[n];
      CHECK(u >= psi.values()[n]);
      if (mask[n] == NodeClass::kParabolicBoundary) CHECK(u == psi.values()[n]);
      CHECK(u <= psi_max + r.config.step_tol);
      CHECK(u >= psi_min_bdry - r.config.step_tol);
    }
    for (const auto& s : r.steps) {
      CHECK(s.converged);
      CHECK(s.residual <= r.config.step_tol);
    }
  }
}

TEST_CASE("complementarity at interior nodes") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {65}, 0.5, 33);
  const auto o = make_obstacle("shrinking-hump", {}, g);
  const auto r = solve(g, *o, config(3.0));
  const auto psi = sample_obstacle(*o, g).psi;
  for (int k = 1; k < g.nt(); ++k) {
    const auto lap = p_laplacian(g, r.u.slice(k), r.config.params);
    for (std::size_t s = 1; s + 1 < g.space_size(); ++s) {
      const double res = (r.u(k, s) - r.u(k - 1, s)) / g.tau() - lap[s];
      const double gap = r.u(k, s) - psi(k, s);
      // Scale: the residual is measured against its diagonal 1/τ + O(1/h²).
      const double scale = 1.0 / g.tau() + 2.0 * 20.0 / (g.h(0) * g.h(0));
      CHECK(res >= -r.config.step_tol * scale);
      CHECK(gap * std::abs(res) <= r.config.step_tol * scale);
    }
  }
}

TEST_CASE("sweeps never increase the step energy") {
  const Grid g = build_grid(2, {{0.0, 1.0}}, {17}, 0.3, 7);
  const auto o = make_obstacle("shrinking-hump", {}, g);
  SolverConfig c = config(3.0);
  c.check_energy = true;
  const auto r = solve(g, *o, c);
  for (const auto& s : r.steps) CHECK(s.energy_monotone);
}

TEST_CASE("sweep order does not change the solution") {
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, {{0.0, 1.0}}, {dim == 1 ? 65 : 17}, 0.4, 9);
    const auto o = make_obstacle("traveling-hump", {}, g);
    SolverConfig fwd = config(3.0), bwd = config(3.0);
    bwd.order = SweepOrder::kBackward;
    const auto a = solve(g, *o, fwd);
    const auto b = solve(g, *o, bwd);
    CHECK(max_diff(a.u.values(), b.u.values()) <= 10 * a.config.step_tol);
  }
}

TEST_CASE("over-relaxation converges to the same solution") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {65}, 0.5, 17);
  const auto o = make_obstacle("shrinking-hump", {}, g);
  SolverConfig c = config(3.0);
  c.step_tol = 1e-13;
  const auto a = solve(g, *o, c);
  c.omega = 1.6;
  const auto b = solve(g, *o, c);
  c.auto_omega = true;
  const auto d = solve(g, *o, c);
  CHECK(b.converged());
  CHECK(d.config.omega > 1.0);
  CHECK(max_diff(a.u.values(), b.u.values()) <= 1e-10);
  CHECK(max_diff(a.u.values(), d.u.values()) <= 1e-10);
}

TEST_CASE("exhausted sweep budget is flagged") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {65}, 0.5, 9);
  const auto o = make_obstacle("shrinking-hump", {}, g);
  SolverConfig c = config(3.0);
  c.max_sweeps = 2;
  const auto r = solve(g, *o, c);
  CHECK_FALSE(r.converged());
  CHECK(r.first_unconverged_level() == 1);
  CHECK(r.steps[0].residual > r.config.step_tol);
  // The constraint still holds exactly.
  const auto psi = sample_obstacle(*o, g).psi;
  for (std::size_t n = 0; n < g.size(); ++n) CHECK(r.u.values()[n] >= psi.values()[n]);
}

TEST_CASE("comparison principle") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {33}, 0.4, 17);
  const auto o = make_obstacle("shrinking-hump", {}, g);
  const auto psi = sample_obstacle(*o, g).psi;
  SolverConfig tight = config(3.0);
  tight.step_tol = 1e-13;
  const auto a = solve(psi, tight);
  CHECK(comparison_check(a, a, 0.0));

  std::vector<double> shifted(psi.values().begin(), psi.values().end());
  for (double& v : shifted) v += 1.0;
  const auto b = solve(ScalarField(g, shifted), tight);
  CHECK(max_diff(b.u.values(), std::vector<double>(g.size(), 0.0)) > 0.0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(std::abs(b.u.values()[n] - a.u.values()[n] - 1.0) <= 1e-10);
  }

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double amp = 0.3 * u(rng), f = 1.0 + 4.0 * u(rng), c0 = u(rng);
    const auto lo = ScalarField::sample(g, [&](const Vec& x, double t) {
      return o->psi(x, t) - amp * (1.0 + std::sin(f * x[0] + c0 + t));
    });
    const auto ra = solve(lo, config(3.0));
    CHECK(comparison_check(ra, a, 1e-10));
  }
  const Grid other = build_grid(1, {{0.0, 1.0}}, {17}, 0.4, 17);
  const auto c = solve(ScalarField::constant(other, 0.0), config(3.0));
  CHECK_THROWS_AS(comparison_check(a, c, 0.0), Error);
}

TEST_CASE("self-convergence of the shrinking hump under refinement") {
  // Reference on the doubled grid; sup errors on shared nodes shrink with h + τ.
  const auto run = [](int n) {
    const Grid g = build_grid(1, {{0.0, 1.0}}, {n}, 0.5, n);
    return solve(g, *make_obstacle("shrinking-hump", {}, g), config(3.0));
  };
  const auto ref = run(257);
  double prev = 0.0;
  for (int n : {33, 65, 129}) {
    const auto r = run(n);
    const int f = 256 / (n - 1);
    double err = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        err = std::max(err, std::abs(r.u(k, static_cast<std::size_t>(i)) -
                                     ref.u(k * f, static_cast<std::size_t>(i * f))));
      }
    }
    const double h = 1.0 / (n - 1);
    CHECK(err <= 1.0 * (h + 0.5 * h));
    if (prev > 0.0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("config resolution") {
  const Grid g = build_grid(2, {{0.0, 1.0}}, {9, 17}, 1.0, 3);
  const auto c = resolve_config(config(3.0), g, 2.0);
  CHECK(c.max_sweeps == 500 * 17);
  CHECK(c.step_tol == doctest::Approx(3e-10));
  SolverConfig bad = config(3.0);
  bad.omega = 2.0;
  CHECK_THROWS_AS(resolve_config(bad, g, 0.0), Error);
  CHECK_THROWS_AS(resolve_config(config(1.0), g, 0.0), Error);
  CHECK(auto_omega(g) > 1.0);
  CHECK(auto_omega(g) < 2.0);
}

TEST_CASE("trajectory csv columns") {
  const Grid g = build_grid(1, {{0.0, 1.0}}, {5}, 0.5, 3);
  const auto o = make_obstacle("constant", {{"value", 1.0}}, g);
  const auto r = solve(g, *o, config(2.0));
  std::ostringstream os;
  write_trajectory_csv(os, r, sample_obstacle(*o, g).psi);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,u,psi");
  std::getline(in, line);
  CHECK(line == "0,0,1,1");
}

}
