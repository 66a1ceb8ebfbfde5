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

#ifndef POBS_VERIFICATION_HPP
#define POBS_VERIFICATION_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pobs/fields.hpp"
#include "pobs/obstacle.hpp"
#include "pobs/solver.hpp"

namespace pobs {

// ---------------------------------------------------------------------------
// Coincidence set

/// Nodes where u − ψ <= tol. The complement within the inner nodes is the
/// non-coincidence set.
struct CoincidenceMask {
  NodeMask xi;
  double tol = 0.0;

  std::size_t count() const;
  /// Inner (non parabolic-boundary) nodes outside the coincidence set.
  NodeMask complement(const Grid& grid) const;
};

/// 100 × the solver step tolerance. Projected nodes sit on ψ exactly, so the
/// mask only has to absorb the iteration error of nodes that reach ψ without
/// being clamped.
double default_coincidence_tol(const SolveResult& result);

/// tol < 0 selects default_coincidence_tol.
CoincidenceMask detect_coincidence(const SolveResult& result, const Obstacle& obstacle,
                                   double tol = -1.0);

/// Nodes at distance >= margin from the lateral boundary with
/// margin <= t <= T − margin.
NodeMask inner_cylinder(const Grid& grid, double margin);

// ---------------------------------------------------------------------------
// Time-derivative formula

struct Theorem2Result {
  double q = 2.0;               ///< p/(p − 1)
  double residual_norm = 0.0;   ///< ‖u_t − [Δ_p u + (ψ_t − Δ_pψ)χ]‖_q on the inner cylinder
  double ut_norm = 0.0;         ///< ‖u_t‖_q on the same region
  double plap_norm = 0.0;       ///< ‖Δ_p u‖_q on the same region
  ScalarField residual;         ///< residual field (zero outside the region)
};

/// u_t by central time differences of the trajectory, Δ_p u by the discrete
/// operator, ψ_t and Δ_pψ from the exact obstacle derivatives.
Theorem2Result theorem2_residual(const SolveResult& result, const Obstacle& obstacle,
                                 const CoincidenceMask& mask, double margin);

// ---------------------------------------------------------------------------
// Test functions

/// Space-time bump Π_a B((x_a − c_a)/r_a) · B((t − c_t)/r_t) with
/// B(z) = (1 − z²)⁴ on |z| < 1. The signed variant is multiplied by
/// (x_0 − c_0)/r_0.
struct TestFunction {
  Vec center{0.0, 0.0};
  Vec radius{1.0, 1.0};
  double t_center = 0.0;
  double t_radius = 1.0;
  bool odd = false;

  double value(int dim, const Vec& x, double t) const;
  double dt(int dim, const Vec& x, double t) const;
  Vec grad(int dim, const Vec& x, double t) const;
};

/// Sampled test functions: values at each node, dt and grad discrete
/// differences of the samples.
struct SampledTestFunction {
  TestFunction fn;
  std::vector<double> value;
  std::vector<double> dt;
  std::vector<Vec> grad;
};

/// Family of nonnegative bumps with centres on a Halton sequence in the
/// middle half of the cylinder and radii of a fifth of each extent, so every
/// support stays away from the parabolic boundary and from t = T. `signed_`
/// holds the odd variants.
class TestFunctionSet {
 public:
  static TestFunctionSet build(const Grid& grid, int count = 20);

  const std::vector<SampledTestFunction>& nonnegative() const { return nonneg_; }
  const std::vector<SampledTestFunction>& odd() const { return odd_; }

 private:
  std::vector<SampledTestFunction> nonneg_;
  std::vector<SampledTestFunction> odd_;
};

// ---------------------------------------------------------------------------
// Variational inequality and supersolution property

struct ViEntry {
  std::size_t member = 0;
  double s = 0.0;
  double slack = 0.0;
};

struct ViResult {
  double min_slack = 0.0;
  std::vector<ViEntry> entries;
  /// Members whose downward perturbation u − s·φ leaves the admissible class.
  std::vector<std::size_t> skipped;
};

/// Slack of the discrete variational inequality for comparison functions
/// u + s·φ_j, s ∈ {+step, −step}:
/// ∬ ⟨A(∇u), ∇(sφ)⟩ + sφ·(u_t + sφ_t) − ½∫ (sφ(·, T))².
/// The downward sign is used only where it keeps u − step·φ_j >= ψ.
ViResult vi_residual(const SolveResult& result, const ScalarField& psi,
                     const TestFunctionSet& tests, double step = 0.1);

/// Slack for one comparison function u + s·φ (s = 0 gives exactly 0).
double vi_slack(const SolveResult& result, const SampledTestFunction& phi, double s);

struct SupersolutionResult {
  double min_integral = 0.0;
  std::vector<double> integrals;
};

/// min over nonnegative φ of ∬ ⟨A(∇u), ∇φ⟩ − u φ_t.
SupersolutionResult supersolution_test(const SolveResult& result, const TestFunctionSet& tests);

// ---------------------------------------------------------------------------
// Regularization

struct EpsRow {
  double eps = 0.0;
  double u_diff = 0.0;     ///< ‖u^ε − u‖_{L^p}
  double grad_diff = 0.0;  ///< ‖∇u^ε − ∇u‖_{L^p}
  bool converged = true;
};

/// Solves the regularized problems and compares with the eps = 0 solution.
/// `reference` may carry an already computed eps = 0 solve on the same grid.
std::vector<EpsRow> eps_convergence_study(const Grid& grid, const Obstacle& obstacle,
                                          SolverConfig config, std::span<const double> eps_list,
                                          const SolveResult* reference = nullptr);

/// Both columns fall by at least `min_drop` (relative) between consecutive
/// rows, unless the later value is already below `floor`.
bool eps_study_monotone(const std::vector<EpsRow>& rows, double floor, double min_drop = 0.05);

// ---------------------------------------------------------------------------
// Gradient estimate

struct Theorem5Result {
  double lhs = 0.0;                  ///< ∬ ζ^p |D_h F|²
  std::array<double, 5> rhs_terms{}; ///< the five right-hand integrals
  double rhs = 0.0;                  ///< their sum
  double ratio = 0.0;                ///< lhs / rhs (0 when rhs = 0)
  bool p_in_range = true;            ///< p > 2
};

/// D_h F from forward and backward axis difference quotients of
/// F = |∇u|^{(p−2)/2}∇u, averaged; right-hand terms
/// ∬(ζ^p + |∇ζ|^p)|∇u|^p, ∬ζ^p|∇u|², ∬|∇ζ|^p|∇ψ|^p, ∬ζ^p(|D²ψ|^p + |∇ψ_t|²),
/// ∫ζ^p|∇ψ(·, T)|².
Theorem5Result theorem5_estimate(const SolveResult& result, const Obstacle& obstacle,
                                 const Cutoff& cutoff);

// ---------------------------------------------------------------------------
// Δ_p u as a function

struct Corollary6Result {
  double max_mismatch = 0.0;
  /// max over φ of ∬ |⟨A(∇u), ∇φ⟩|, the size of the integrals compared.
  double scale = 0.0;
  std::vector<double> mismatches;
};

/// max over φ (nonnegative and odd members) of |∬ φ Δ_p u + ∬ ⟨A(∇u), ∇φ⟩|,
/// with Δ_p u from the discrete operator and ∇u, ∇φ nodal.
Corollary6Result corollary6_identity(const SolveResult& result, const TestFunctionSet& tests);

// ---------------------------------------------------------------------------
// Necessary condition on the coincidence set

struct ViscosityResult {
  bool empty = true;
  std::size_t count = 0;
  double min_value = 0.0;  ///< min over inner coincidence nodes of ψ_t − Δ_pψ
};

ViscosityResult viscosity_necessary_condition(const SolveResult& result, const Obstacle& obstacle,
                                              const CoincidenceMask& mask);

/// 10·(h + τ)·(1 + max|ψ_t| + max|Δ_pψ|).
double default_viscosity_tol(const Grid& grid, const Obstacle& obstacle, double p);

// ---------------------------------------------------------------------------
// Report

struct CheckRecord {
  std::string name;
  bool pass = false;
  /// Ordered metrics written as `name.metric = value`.
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;
};

class VerificationReport {
 public:
  void add(CheckRecord record);
  bool all_pass() const;
  const std::vector<CheckRecord>& checks() const { return checks_; }
  const CheckRecord* find(const std::string& name) const;
  std::vector<std::string> failing() const;

  /// Metadata lines `meta.key = value` (scenario name, grid sizes, ...).
  void set_meta(const std::string& key, const std::string& value);

  std::string to_text() const;
  std::string to_kv() const;

 private:
  std::vector<CheckRecord> checks_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

/// Names accepted by SuiteSpec::checks.
const std::vector<std::string>& check_names();

/// A verification run over one or more refinement levels.
struct SuiteSpec {
  std::string name = "scenario";
  Grid grid;  ///< level 0
  int levels = 1;
  std::string obstacle_id;
  ObstacleParams obstacle_params;
  SolverConfig config;
  std::vector<double> eps_list;
  double cutoff_margin = 0.1;
  double theorem2_margin = 0.1;
  double vi_step = 0.1;
  /// Multiplies every absolute tolerance; 0 demands exact agreement.
  double tol_scale = 1.0;
  std::set<std::string> checks;  ///< enabled checks (empty = all)
};

/// Level l of a refinement: (nx − 1)·2^l + 1 nodes per axis and in time.
Grid refine(const Grid& base, int level);

struct LevelSummary {
  Grid grid;
  bool converged = true;
  double wall_seconds = 0.0;
  double theorem2_residual = 0.0;
  double theorem5_lhs = 0.0;
};

struct SuiteOutcome {
  VerificationReport report;
  std::vector<LevelSummary> levels;
  std::vector<EpsRow> eps_rows;
  bool converged = true;
  /// Resolved step tolerance of the finest level.
  double step_tol = 0.0;
};

SuiteOutcome run_suite(const SuiteSpec& spec);

}  // namespace pobs

#endif  // POBS_VERIFICATION_HPP
