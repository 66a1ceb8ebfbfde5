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

#include "pobs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

#include "pobs/error.hpp"

namespace pobs {

double auto_omega(const Grid& grid) {
  double rho = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    rho += std::cos(std::numbers::pi / (grid.nx(a) - 1));
  }
  rho /= grid.dim();
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

SolverConfig resolve_config(SolverConfig config, const Grid& grid, double psi_sup) {
  validate(config.params);
  if (config.max_sweeps <= 0) {
    int n = 0;
    for (int a = 0; a < grid.dim(); ++a) n = std::max(n, grid.nx(a));
    config.max_sweeps = 500 * n;
  }
  if (!(config.step_tol > 0.0)) config.step_tol = 1e-10 * (1.0 + psi_sup);
  if (!std::isfinite(config.step_tol)) throw_input("solver.step_tol must be finite");
  if (config.auto_omega) {
    config.omega = auto_omega(grid);
    config.auto_omega = false;
  }
  if (!(config.omega > 0.0 && config.omega < 2.0)) {
    throw_input("solver.omega must lie in (0, 2)");
  }
  return config;
}

double step_energy(const Grid& grid, std::span<const double> v, std::span<const double> u_prev,
                   const PParams& params) {
  double kinetic = 0.0;
  const double w = grid.cell_volume() / (2.0 * grid.tau());
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (grid.on_lateral(s)) continue;
    const double d = v[s] - u_prev[s];
    kinetic += w * d * d;
  }
  return p_energy(grid, v, params) + kinetic;
}

namespace {

std::vector<std::size_t> sweep_nodes(const Grid& grid, SweepOrder order) {
  std::vector<std::size_t> nodes;
  for (std::size_t s = 0; s < grid.space_size(); ++s) {
    if (!grid.on_lateral(s)) nodes.push_back(s);
  }
  if (order == SweepOrder::kBackward) std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

// Root of the nodewise residual R(w) = (w − u_prev)/τ − Δ_p(w). R is strictly
// increasing with slope >= 1/τ, so [w0 − τR(w0), w0] (or the mirror) brackets it.
double local_root(const PLaplaceStencil& stencil, std::span<double> v, std::size_t s,
                  double u_prev, double inv_tau, double tau, double tol) {
  auto residual = [&](double w) {
    const auto loc = stencil.at(v, s, w);
    return std::pair{(w - u_prev) * inv_tau - loc.value, inv_tau + loc.derivative};
  };
  double w = v[s];
  auto [r, d] = residual(w);
  if (r == 0.0) return w;
  double lo = r > 0.0 ? w - tau * r : w;
  double hi = r > 0.0 ? w : w - tau * r;
  for (int it = 0; it < 100; ++it) {
    const double step = r / d;
    if (std::abs(step) <= tol) return w - step;
    double next = w - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == w || hi - lo <= tol) return next;
    w = next;
    std::tie(r, d) = residual(w);
    if (r == 0.0) break;
    (r > 0.0 ? hi : lo) = w;
  }
  return w;
}

}  // namespace

StepOutcome step_vi(std::span<const double> u_prev, std::span<const double> lower,
                    std::span<const double> boundary, const SolverConfig& config,
                    const Grid& grid) {
  const std::size_t n = grid.space_size();
  if (u_prev.size() != n || boundary.size() != n || (!lower.empty() && lower.size() != n)) {
    throw_input("step_vi: slice sizes do not match the grid");
  }
  const bool project = !lower.empty();
  const double tau = grid.tau();
  const double inv_tau = 1.0 / tau;
  const double omega = config.omega;
  const double local_tol = 1e-2 * config.step_tol;
  const PLaplaceStencil stencil(grid, config.params);
  const auto nodes = sweep_nodes(grid, config.order);

  StepOutcome out;
  std::vector<double>& v = out.v;
  v.assign(u_prev.begin(), u_prev.end());
  for (std::size_t s = 0; s < n; ++s) {
    if (grid.on_lateral(s)) {
      v[s] = boundary[s];
    } else if (project) {
      v[s] = std::max(v[s], lower[s]);
    }
  }

  // Complementarity residual in solution units.
  const auto residual = [&] {
    double res = 0.0;
    for (std::size_t s : nodes) {
      const auto loc = stencil.at(v, s, v[s]);
      const double r = (v[s] - u_prev[s]) * inv_tau - loc.value;
      const double d = inv_tau + loc.derivative;
      const bool active = project && v[s] <= lower[s];
      res = std::max(res, (active ? std::max(0.0, -r) : std::abs(r)) / d);
    }
    return res;
  };

  double energy = config.check_energy ? step_energy(grid, v, u_prev, config.params) : 0.0;
  StepStats& st = out.stats;
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double inc = 0.0;
    for (std::size_t s : nodes) {
      const double old = v[s];
      double next;
      if (project && omega >= 1.0 && old <= lower[s] &&
          (lower[s] - u_prev[s]) * inv_tau - stencil.at(v, s, lower[s]).value >= 0.0) {
        // Constraint stays active: the unconstrained root lies below lower.
        next = lower[s];
      } else {
        const double root = local_root(stencil, v, s, u_prev[s], inv_tau, tau, local_tol);
        next = old + omega * (root - old);
        if (project) next = std::max(next, lower[s]);
      }
      inc = std::max(inc, std::abs(next - old));
      v[s] = next;
    }
    st.sweeps = sweep;
    st.increment = inc;
    if (config.check_energy) {
      const double e = step_energy(grid, v, u_prev, config.params);
      if (e > energy + 1e-12 * std::max(1.0, std::abs(energy))) st.energy_monotone = false;
      energy = e;
    }
    if (inc <= config.step_tol) {
      st.residual = residual();
      if (st.residual <= config.step_tol) {
        st.converged = true;
        break;
      }
    }
  }
  if (!st.converged) st.residual = residual();
  return out;
}

StepOutcome step_vi(std::span<const double> u_prev, int k_next, const SolverConfig& config,
                    const Grid& grid, const Obstacle& obstacle) {
  if (k_next < 1 || k_next >= grid.nt()) throw_input("step_vi: time level out of range");
  std::vector<double> psi(grid.space_size());
  const double t = grid.t(k_next);
  for (std::size_t s = 0; s < psi.size(); ++s) psi[s] = obstacle.psi(grid.point(s), t);
  return step_vi(u_prev, psi, psi, config, grid);
}

bool SolveResult::converged() const { return first_unconverged_level() < 0; }

int SolveResult::first_unconverged_level() const {
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!steps[k].converged) return static_cast<int>(k) + 1;
  }
  return -1;
}

namespace {

SolveResult march(const ScalarField& data, SolverConfig config, bool project) {
  const auto start = std::chrono::steady_clock::now();
  const Grid& grid = data.grid();
  config = resolve_config(config, grid, data.max_abs());
  std::vector<double> u(grid.size());
  const auto first = data.slice(0);
  std::copy(first.begin(), first.end(), u.begin());
  std::vector<StepStats> steps;
  steps.reserve(static_cast<std::size_t>(grid.nt() - 1));
  for (int k = 1; k < grid.nt(); ++k) {
    const std::span<const double> prev(u.data() + grid.index(k - 1, 0), grid.space_size());
    const auto level = data.slice(k);
    auto step = step_vi(prev, project ? level : std::span<const double>{}, level, config, grid);
    std::copy(step.v.begin(), step.v.end(), u.begin() + static_cast<std::ptrdiff_t>(grid.index(k, 0)));
    steps.push_back(step.stats);
  }
  SolveResult r{ScalarField(grid, std::move(u)), config, std::move(steps), 0.0};
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

SolveResult solve(const Grid& grid, const Obstacle& obstacle, SolverConfig config) {
  check_obstacle_consistency(obstacle, grid);
  const auto psi =
      ScalarField::sample(grid, [&](const Vec& x, double t) { return obstacle.psi(x, t); });
  return march(psi, config, true);
}

SolveResult solve(const ScalarField& psi, SolverConfig config) { return march(psi, config, true); }

SolveResult solve_unconstrained(const ScalarField& boundary_data, SolverConfig config) {
  return march(boundary_data, config, false);
}

bool comparison_check(const SolveResult& a, const SolveResult& b, double tol) {
  if (!(a.grid() == b.grid())) throw_input("comparison_check: results live on different grids");
  const auto ua = a.u.values();
  const auto ub = b.u.values();
  for (std::size_t n = 0; n < ua.size(); ++n) {
    if (ua[n] > ub[n] + tol) return false;
  }
  return true;
}

void write_trajectory_csv(std::ostream& os, const SolveResult& result, const ScalarField& psi) {
  write_csv(os, result.grid(), {{"u", result.u.values()}, {"psi", psi.values()}});
}

}  // namespace pobs
