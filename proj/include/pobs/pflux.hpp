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

#ifndef POBS_PFLUX_HPP
#define POBS_PFLUX_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pobs/geometry.hpp"

namespace pobs {

/// Exponent p >= 2 and regularization eps >= 0 of the flux
/// (|g|² + eps²)^{(p-2)/2} g.
struct PParams {
  double p = 2.0;
  double eps = 0.0;
};

/// Throws Error(kInput) unless p >= 2 and eps >= 0, both finite.
void validate(const PParams& params);

/// base^e for base >= 0 with shortcuts for the exponents that occur for
/// integer and half-integer p. 0^0 is 1.
inline double pow_nonneg(double base, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return base;
  if (e == 0.5) return std::sqrt(base);
  if (e == 1.5) return base * std::sqrt(base);
  if (e == 2.0) return base * base;
  return std::pow(base, e);
}

template <std::size_t N>
double dot(const std::array<double, N>& a, const std::array<double, N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
double norm(const std::array<double, N>& a) {
  return std::sqrt(dot(a, a));
}

template <std::size_t N>
std::array<double, N> scaled(const std::array<double, N>& a, double c) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = c * a[i];
  return r;
}

template <std::size_t N>
std::array<double, N> minus(const std::array<double, N>& a, const std::array<double, N>& b) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

/// (|g|² + eps²)^{(p-2)/2}, the scalar factor of the regularized flux.
inline double flux_factor(double g2, const PParams& params) {
  return pow_nonneg(g2 + params.eps * params.eps, 0.5 * (params.p - 2.0));
}

/// Regularized flux (|g|² + eps²)^{(p-2)/2} g. Continuous at g = 0.
template <std::size_t N>
std::array<double, N> flux_eps(const std::array<double, N>& g, const PParams& params) {
  return scaled(g, flux_factor(dot(g, g), params));
}

/// |g|^{(p-2)/2} g.
template <std::size_t N>
std::array<double, N> f_map(const std::array<double, N>& g, double p) {
  return scaled(g, pow_nonneg(dot(g, g), 0.25 * (p - 2.0)));
}

/// Both sides of an inequality lhs <= rhs.
struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// (4/p²)|F(b) − F(a)|² against ⟨|b|^{p-2}b − |a|^{p-2}a, b − a⟩.
template <std::size_t N>
InequalitySides monotonicity_lhs_rhs(const std::array<double, N>& a,
                                     const std::array<double, N>& b, double p) {
  const PParams plain{p, 0.0};
  const auto dF = minus(f_map(b, p), f_map(a, p));
  const auto dA = minus(flux_eps(b, plain), flux_eps(a, plain));
  return {4.0 / (p * p) * dot(dF, dF), dot(dA, minus(b, a))};
}

/// ||b|^{p-2}b − |a|^{p-2}a| against (p−1)(|b|^{(p-2)/2} + |a|^{(p-2)/2})|F(b) − F(a)|.
template <std::size_t N>
InequalitySides lipschitz_bound_lhs_rhs(const std::array<double, N>& a,
                                        const std::array<double, N>& b, double p) {
  const PParams plain{p, 0.0};
  const auto dA = minus(flux_eps(b, plain), flux_eps(a, plain));
  const auto dF = minus(f_map(b, p), f_map(a, p));
  const double e = 0.25 * (p - 2.0);
  const double weight = pow_nonneg(dot(b, b), e) + pow_nonneg(dot(a, a), e);
  return {norm(dA), (p - 1.0) * weight * norm(dF)};
}

/// abc against eps²a²/2 + eps^{-p}b^p/p + (p−2)c^{2p/(p−2)}/(2p).
/// Throws Error(kInput) for p <= 2, eps_y <= 0 or a negative factor.
InequalitySides young3(double a, double b, double c, double p, double eps_y);

/// |∇ψ|^{p−2}(Δψ + (p−2)⟨D²ψ∇ψ, ∇ψ⟩/|∇ψ|²) from exact derivatives; `hess`
/// is row-major 2×2. Zero at ∇ψ = 0 when p > 2.
double p_laplacian_exact(int dim, const Vec& grad, const std::array<double, 4>& hess, double p);

/// Discrete p-Laplacian of one spatial slice.
///
/// The operator is minus the gradient (per unit node volume) of the discrete
/// energy E(u) = Σ_T |T| (1/p)(|∇u_T|² + eps²)^{p/2}, where in 1D T runs over
/// the grid intervals and in 2D over the four corner triangles of every cell
/// (both diagonal splittings, each triangle weighted by a quarter of the cell).
/// The flux lives on intervals / triangles and is exact for affine data; for
/// p = 2 it reduces to the 3-point / 5-point Laplacian. Values on the box
/// faces are set to zero.
std::vector<double> p_laplacian(const Grid& grid, std::span<const double> slice,
                                const PParams& params);

/// The discrete energy E(u) above.
double p_energy(const Grid& grid, std::span<const double> slice, const PParams& params);

/// Point evaluation of the discrete p-Laplacian at one inner node with the
/// node value replaced by a trial value; used by the nodewise solver.
class PLaplaceStencil {
 public:
  PLaplaceStencil(const Grid& grid, const PParams& params);

  struct Local {
    double value = 0.0;       ///< Δ_p at the node
    double derivative = 0.0;  ///< −dΔ_p/dv (nonnegative)
  };

  /// Evaluates at node s (must not lie on a box face) with u[s] := v. The
  /// derivative uses eps floored at 1e-12 so it stays positive at ∇u = 0.
  Local at(std::span<const double> u, std::size_t s, double v) const {
    if (grid_.dim() != 1) return at_2d(u, s, v);
    const double gp = (u[s + 1] - v) * inv_h_;
    const double gm = (v - u[s - 1]) * inv_h_;
    const double rp = gp * gp;
    const double rm = gm * gm;
    Local out;
    out.value = (pow_nonneg(rp + eps2_, half_exp_) * gp - pow_nonneg(rm + eps2_, half_exp_) * gm) *
                inv_h_;
    out.derivative = (slope_1d(rp) + slope_1d(rm)) * inv_h_ * inv_h_;
    return out;
  }

 private:
  Local at_2d(std::span<const double> u, std::size_t s, double v) const;

  // dA/dg for the 1D flux at g² = r, with the floored eps.
  double slope_1d(double r) const {
    if (half_exp_ == 0.0) return 1.0;
    const double q = r + jac_eps2_;
    return pow_nonneg(q, half_exp_) * (1.0 + (params_.p - 2.0) * r / q);
  }

  Grid grid_;
  PParams params_;
  double jac_eps_;
  double jac_eps2_;
  double eps2_;
  double half_exp_;
  double inv_h_;
};

}  // namespace pobs

#endif  // POBS_PFLUX_HPP
