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

#ifndef POBS_FIELDS_HPP
#define POBS_FIELDS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pobs/geometry.hpp"

namespace pobs {

/// Per-node inclusion flags over the full space-time grid (1 = included).
using NodeMask = std::vector<std::uint8_t>;

/// Nodal values over the space-time grid. Values are finite by construction.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const Grid& grid, std::vector<double> values);

  static ScalarField constant(const Grid& grid, double value);

  /// Samples f(x, t) at every node.
  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (int k = 0; k < grid.nt(); ++k) {
      const double t = grid.t(k);
      for (std::size_t s = 0; s < grid.space_size(); ++s) {
        v[grid.index(k, s)] = f(grid.point(s), t);
      }
    }
    return ScalarField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slice(int k) const {
    return std::span<const double>(values_).subspan(grid_.index(k, 0), grid_.space_size());
  }
  double operator()(int k, std::size_t s) const { return values_[grid_.index(k, s)]; }
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// One spatial vector per node. Components beyond grid.dim() are zero.
class VectorField {
 public:
  VectorField() = default;
  VectorField(const Grid& grid, std::vector<Vec> values);

  const Grid& grid() const { return grid_; }
  std::span<const Vec> values() const { return values_; }
  std::span<const Vec> slice(int k) const {
    return std::span<const Vec>(values_).subspan(grid_.index(k, 0), grid_.space_size());
  }
  const Vec& operator()(int k, std::size_t s) const { return values_[grid_.index(k, s)]; }

 private:
  Grid grid_;
  std::vector<Vec> values_;
};

/// Spatial gradient of one time slice: central differences inside, one-sided
/// second-order differences on the box faces.
std::vector<Vec> gradient(const Grid& grid, std::span<const double> slice);
std::vector<Vec> gradient(const ScalarField& field, int k);
VectorField gradient(const ScalarField& field);

/// Divergence of one vector slice with the same stencils as gradient().
std::vector<double> divergence(const Grid& grid, std::span<const Vec> slice);
std::vector<double> divergence(const VectorField& field, int k);

/// Time derivative: central differences at inner levels, one-sided
/// second-order at t = 0 and t = T. Requires nt >= 3.
ScalarField time_diff(const ScalarField& field);

/// Summation in a fixed binary tree; the result does not depend on how the
/// caller chunks the work.
double pairwise_sum(std::span<const double> terms);

/// Trapezoid-type quadrature weight of a node (1 inside, 1/2 per box face or
/// end of the time axis), times the cell volume and tau.
double quadrature_weight(const Grid& grid, int k, std::size_t s);

/// ∬ f over the nodes selected by `region` (all nodes if null).
double integrate(const Grid& grid, std::span<const double> f, const NodeMask* region = nullptr);

/// ∫ f dx for one spatial slice.
double integrate_space(const Grid& grid, std::span<const double> slice);

struct NormOptions {
  /// Nonnegative weight, sized either grid.size() or grid.space_size()
  /// (x-only weight such as ζ^p). Empty means unit weight.
  std::span<const double> weight{};
  /// Nodes to include; null means all nodes.
  const NodeMask* region = nullptr;
};

/// (Σ w·weight·|v|^q)^{1/q} with quadrature weights w. Throws for q < 1.
double lq_norm(const ScalarField& field, double q, const NormOptions& opts = {});
/// Same for the Euclidean magnitude of a vector field.
double lq_norm(const VectorField& field, double q, const NormOptions& opts = {});

/// Translate of a field along one axis: value at node x is f(x + steps·h·e_axis).
/// Nodes whose source leaves the grid are marked invalid (and hold 0).
struct ShiftedField {
  ScalarField field;
  NodeMask valid;
};

ShiftedField shift(const ScalarField& field, int axis, int steps);
/// Real-valued increment; must be an integer multiple of the grid step.
ShiftedField shift(const ScalarField& field, int axis, double increment);

/// CSV with columns t, x[, y] followed by the named value columns; one row per
/// node in node order, values printed with %.17g.
void write_csv(std::ostream& os, const Grid& grid,
               const std::vector<std::pair<std::string, std::span<const double>>>& columns);
void write_csv(std::ostream& os, const ScalarField& field, const std::string& name = "value");

std::string format_double(double v);

}  // namespace pobs

#endif  // POBS_FIELDS_HPP
