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

#ifndef POBS_OBSTACLE_HPP
#define POBS_OBSTACLE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pobs/fields.hpp"
#include "pobs/geometry.hpp"

namespace pobs {

/// Row-major symmetric 2×2 matrix.
using Mat = std::array<double, 4>;

/// An obstacle ψ(x, t) with the derivatives the verification checks need.
/// ψ also supplies the data on the parabolic boundary.
class Obstacle {
 public:
  virtual ~Obstacle() = default;

  virtual std::string id() const = 0;
  virtual double psi(const Vec& x, double t) const = 0;
  virtual double psi_t(const Vec& x, double t) const = 0;
  virtual Vec grad(const Vec& x, double t) const = 0;
  /// ∇ψ_t.
  virtual Vec grad_t(const Vec& x, double t) const = 0;
  virtual Mat hess(const Vec& x, double t) const = 0;
  /// Catalog obstacles have closed-form derivatives.
  virtual bool analytic() const { return true; }
};

using ObstacleParams = std::map<std::string, double>;

/// Names of the catalog obstacles.
const std::vector<std::string>& obstacle_catalog();

/// Parameters accepted by one catalog entry, with their defaults.
ObstacleParams obstacle_defaults(std::string_view id);

/// Creates a catalog obstacle for `grid` (the affine-inactive entry needs the
/// box). Unknown ids or parameters throw Error(kInput).
std::shared_ptr<const Obstacle> make_obstacle(std::string_view id, const ObstacleParams& params,
                                              const Grid& grid);

/// Probes ψ_t, ∇ψ, ∇ψ_t and D²ψ against central finite differences of the
/// lower-order callbacks at pseudo-random points of the cylinder. Throws
/// Error(kInput) on a mismatch beyond O(δ²)-scaled tolerance.
void check_obstacle_consistency(const Obstacle& obstacle, const Grid& grid,
                                std::uint64_t seed = 12345, int probes = 64);

/// Sampled derivative data of an obstacle on a grid.
struct ObstacleSamples {
  ScalarField psi;
  ScalarField psi_t;
  VectorField grad;
  VectorField grad_t;
  std::vector<Mat> hess;
};

ObstacleSamples sample_obstacle(const Obstacle& obstacle, const Grid& grid);

/// Δ_p ψ from the exact derivatives at every node.
ScalarField exact_p_laplacian(const Obstacle& obstacle, const Grid& grid, double p);

/// max over nodes of |D²ψ| (Frobenius).
double max_hessian_norm(const Obstacle& obstacle, const Grid& grid);

}  // namespace pobs

#endif  // POBS_OBSTACLE_HPP
