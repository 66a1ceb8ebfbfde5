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

#include "pobs/pflux.hpp"

#include <string>

#include "pobs/error.hpp"

namespace pobs {

void validate(const PParams& params) {
  if (!std::isfinite(params.p) || params.p < 2.0) {
    throw_input("p must be a finite number >= 2");
  }
  if (!std::isfinite(params.eps) || params.eps < 0.0) {
    throw_input("eps must be a finite number >= 0");
  }
}

InequalitySides young3(double a, double b, double c, double p, double eps_y) {
  if (!(p > 2.0)) throw_input("young3: requires p > 2");
  if (!(eps_y > 0.0)) throw_input("young3: requires eps > 0");
  if (a < 0.0 || b < 0.0 || c < 0.0) throw_input("young3: factors must be nonnegative");
  const double rhs = 0.5 * eps_y * eps_y * a * a + std::pow(eps_y, -p) * std::pow(b, p) / p +
                     (p - 2.0) * std::pow(c, 2.0 * p / (p - 2.0)) / (2.0 * p);
  return {a * b * c, rhs};
}

double p_laplacian_exact(int dim, const Vec& grad, const std::array<double, 4>& hess, double p) {
  double laplace = 0.0;
  for (int a = 0; a < dim; ++a) laplace += hess[static_cast<std::size_t>(3 * a)];
  if (p == 2.0) return laplace;
  double g2 = 0.0;
  double quad = 0.0;
  for (int a = 0; a < dim; ++a) {
    g2 += grad[a] * grad[a];
    for (int b = 0; b < dim; ++b) {
      quad += grad[a] * hess[static_cast<std::size_t>(2 * a + b)] * grad[b];
    }
  }
  if (g2 == 0.0) return 0.0;
  return pow_nonneg(g2, 0.5 * (p - 2.0)) * (laplace + (p - 2.0) * quad / g2);
}

namespace {

// Corner triangles of one cell. The cell spans nodes (i, j) .. (i+1, j+1);
// corner c sits at (i + ci, j + cj) and its legs point into the cell.
struct Corner {
  int ci, cj;
};
constexpr std::array<Corner, 4> kCorners{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};

template <class Visit>
void for_each_triangle(const Grid& grid, std::span<const double> u, Visit&& visit) {
  const int nx = grid.nx(0);
  const int ny = grid.nx(1);
  const double hx = grid.h(0);
  const double hy = grid.h(1);
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      for (const Corner& c : kCorners) {
        const int sx = c.ci == 0 ? 1 : -1;
        const int sy = c.cj == 0 ? 1 : -1;
        const std::size_t n0 = grid.space_index(i + c.ci, j + c.cj);
        const std::size_t nxn = grid.space_index(i + c.ci + sx, j + c.cj);
        const std::size_t nyn = grid.space_index(i + c.ci, j + c.cj + sy);
        const Vec g{sx * (u[nxn] - u[n0]) / hx, sy * (u[nyn] - u[n0]) / hy};
        visit(g, n0, nxn, nyn, sx, sy);
      }
    }
  }
}

}  // namespace

std::vector<double> p_laplacian(const Grid& grid, std::span<const double> slice,
                                const PParams& params) {
  std::vector<double> out(grid.space_size(), 0.0);
  if (grid.dim() == 1) {
    const int n = grid.nx(0);
    const double h = grid.h(0);
    double left = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const double g = (slice[i + 1] - slice[i]) / h;
      const double right = flux_factor(g * g, params) * g;
      if (i > 0) out[i] = (right - left) / h;
      left = right;
    }
    return out;
  }
  // dE/du accumulated per node; Δ_p = −(dE/du) / (hx hy) with weight 1/4 per
  // corner triangle.
  const double hx = grid.h(0);
  const double hy = grid.h(1);
  for_each_triangle(grid, slice,
                    [&](const Vec& g, std::size_t n0, std::size_t nxn, std::size_t nyn, int sx,
                        int sy) {
                      const Vec a = flux_eps(g, params);
                      const double fx = 0.25 * a[0] * sx / hx;
                      const double fy = 0.25 * a[1] * sy / hy;
                      out[n0] -= -fx - fy;
                      out[nxn] -= fx;
                      out[nyn] -= fy;
                    });
  for (std::size_t s = 0; s < out.size(); ++s) {
    if (grid.on_lateral(s)) out[s] = 0.0;
  }
  return out;
}

double p_energy(const Grid& grid, std::span<const double> slice, const PParams& params) {
  const double p = params.p;
  const double e2 = params.eps * params.eps;
  std::vector<double> terms;
  if (grid.dim() == 1) {
    const double h = grid.h(0);
    for (int i = 0; i + 1 < grid.nx(0); ++i) {
      const double g = (slice[i + 1] - slice[i]) / h;
      terms.push_back(h * pow_nonneg(g * g + e2, 0.5 * p) / p);
    }
  } else {
    const double w = 0.25 * grid.h(0) * grid.h(1);
    for_each_triangle(grid, slice, [&](const Vec& g, std::size_t, std::size_t, std::size_t, int,
                                       int) {
      terms.push_back(w * pow_nonneg(dot(g, g) + e2, 0.5 * p) / p);
    });
  }
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc;
}

PLaplaceStencil::PLaplaceStencil(const Grid& grid, const PParams& params)
    : grid_(grid),
      params_(params),
      jac_eps_(std::max(params.eps, 1e-12)),
      jac_eps2_(jac_eps_ * jac_eps_),
      eps2_(params.eps * params.eps),
      half_exp_(0.5 * (params.p - 2.0)),
      inv_h_(1.0 / grid.h(0)) {}

PLaplaceStencil::Local PLaplaceStencil::at_2d(std::span<const double> u, std::size_t s,
                                              double v) const {
  const double p = params_.p;
  const double e = 0.5 * (p - 2.0);
  const double je2 = jac_eps_ * jac_eps_;
  // q^T DA(g) q with the floored eps.
  auto curvature = [&](const Vec& g, const Vec& q) {
    const double g2 = dot(g, g);
    if (p == 2.0) return dot(q, q);
    const double r = g2 + je2;
    const double gq = dot(g, q);
    return pow_nonneg(r, e) * (dot(q, q) + (p - 2.0) * gq * gq / r);
  };

  Local out;
  const auto c = grid_.space_coords(s);
  const int i = c[0];
  const int j = c[1];
  const double hx = grid_.h(0);
  const double hy = grid_.h(1);
  auto val = [&](int a, int b) { return u[grid_.space_index(a, b)]; };
  double sum = 0.0;
  double dsum = 0.0;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      const double ux = val(i + sx, j);
      const double uy = val(i, j + sy);
      const double uxy = val(i + sx, j + sy);
      // Triangle with its right angle at this node.
      {
        const Vec g{sx * (ux - v) / hx, sy * (uy - v) / hy};
        const Vec q{-sx / hx, -sy / hy};
        sum += dot(flux_eps(g, params_), q);
        dsum += curvature(g, q);
      }
      // Right angle at the x-neighbour, leg back to this node.
      {
        const Vec g{-sx * (v - ux) / hx, sy * (uxy - ux) / hy};
        const Vec q{-sx / hx, 0.0};
        sum += dot(flux_eps(g, params_), q);
        dsum += curvature(g, q);
      }
      // Right angle at the y-neighbour.
      {
        const Vec g{sx * (uxy - uy) / hx, -sy * (v - uy) / hy};
        const Vec q{0.0, -sy / hy};
        sum += dot(flux_eps(g, params_), q);
        dsum += curvature(g, q);
      }
    }
  }
  out.value = -0.25 * sum;
  out.derivative = 0.25 * dsum;
  return out;
}

}  // namespace pobs
