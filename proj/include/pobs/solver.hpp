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

#ifndef POBS_SOLVER_HPP
#define POBS_SOLVER_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "pobs/fields.hpp"
#include "pobs/obstacle.hpp"
#include "pobs/pflux.hpp"

namespace pobs {

enum class SweepOrder { kForward, kBackward };

/// Settings of the implicit Euler / projected nonlinear Gauss–Seidel solver.
/// Non-positive max_sweeps or step_tol select the defaults (500·nx sweeps,
/// 1e-10·(1 + ‖ψ‖∞)) when the config is resolved against a problem.
struct SolverConfig {
  PParams params;
  int max_sweeps = 0;
  double step_tol = 0.0;
  /// Relaxation factor in (0, 2); 1 is plain Gauss–Seidel.
  double omega = 1.0;
  /// Replaces omega by the optimal SOR factor of the grid Laplacian.
  bool auto_omega = false;
  SweepOrder order = SweepOrder::kForward;
  /// Track the discrete step energy after every sweep.
  bool check_energy = false;
};

/// Fills defaults and validates ranges. `psi_sup` is ‖ψ‖∞ over the cylinder.
SolverConfig resolve_config(SolverConfig config, const Grid& grid, double psi_sup);

/// Optimal SOR factor 2/(1 + sqrt(1 − ρ²)) for the Jacobi radius ρ of the
/// grid Laplacian with Dirichlet data.
double auto_omega(const Grid& grid);

struct StepStats {
  int sweeps = 0;
  /// Sup-norm change of the last sweep.
  double increment = 0.0;
  /// Complementarity residual, in solution units (residual / diagonal).
  double residual = 0.0;
  bool converged = false;
  /// Only meaningful with check_energy.
  bool energy_monotone = true;
};

struct StepOutcome {
  std::vector<double> v;
  StepStats stats;
};

/// One implicit Euler step: finds v with v >= lower,
/// (v − u_prev)/τ − Δ_p v >= 0 and equality where v > lower, at every inner
/// node; box-face nodes take `boundary`. An empty `lower` drops the
/// constraint. `config` must be resolved. A step that exhausts max_sweeps is
/// returned with stats.converged = false.
StepOutcome step_vi(std::span<const double> u_prev, std::span<const double> lower,
                    std::span<const double> boundary, const SolverConfig& config,
                    const Grid& grid);

/// Same, with the obstacle and boundary values taken from ψ(·, t_{k_next}).
StepOutcome step_vi(std::span<const double> u_prev, int k_next, const SolverConfig& config,
                    const Grid& grid, const Obstacle& obstacle);

struct SolveResult {
  ScalarField u;
  SolverConfig config;  // resolved
  std::vector<StepStats> steps;
  double wall_seconds = 0.0;

  const Grid& grid() const { return u.grid(); }
  double eps() const { return config.params.eps; }
  bool converged() const;
  /// Index of the first time level whose step did not converge, or -1.
  int first_unconverged_level() const;
};

/// Obstacle problem on the cylinder: u(·, 0) = ψ(·, 0), u = ψ on the lateral
/// boundary and every later level from step_vi. Checks the obstacle's
/// derivative callbacks before solving.
SolveResult solve(const Grid& grid, const Obstacle& obstacle, SolverConfig config);
/// Same for a sampled obstacle.
SolveResult solve(const ScalarField& psi, SolverConfig config);

/// The same stepping without the constraint; only the parabolic-boundary
/// values of `boundary_data` are used.
SolveResult solve_unconstrained(const ScalarField& boundary_data, SolverConfig config);

/// True iff u_a <= u_b + tol at every node. Throws Error(kInput) on grids
/// that differ.
bool comparison_check(const SolveResult& a, const SolveResult& b, double tol);

/// Trajectory CSV: t, x[, y], u, psi.
void write_trajectory_csv(std::ostream& os, const SolveResult& result, const ScalarField& psi);

/// Implicit Euler step energy E(v) + Σ |cell| (v − u_prev)²/(2τ) over inner nodes.
double step_energy(const Grid& grid, std::span<const double> v, std::span<const double> u_prev,
                   const PParams& params);

}  // namespace pobs

#endif  // POBS_SOLVER_HPP
