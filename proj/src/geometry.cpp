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

#include "pobs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pobs/error.hpp"

namespace pobs {

namespace {

template <class T>
T per_axis(const std::vector<T>& v, int axis, const char* what) {
  if (v.size() == 1) return v[0];
  if (static_cast<int>(v.size()) > axis) return v[static_cast<std::size_t>(axis)];
  throw_input(std::string(what) + ": expected one value or one per axis");
}

}  // namespace

Grid build_grid(int dim, const std::vector<Interval>& extent, const std::vector<int>& nx,
                double T, int nt) {
  if (dim < 1 || dim > kMaxDim) {
    throw_input("grid.dim must be 1 or 2, got " + std::to_string(dim));
  }
  if (extent.empty() || nx.empty()) throw_input("grid: extent and nx are required");
  if (extent.size() > 1 && static_cast<int>(extent.size()) != dim) {
    throw_input("grid.extent: expected one interval or one per axis");
  }
  if (nx.size() > 1 && static_cast<int>(nx.size()) != dim) {
    throw_input("grid.nx: expected one value or one per axis");
  }
  if (!(T > 0.0) || !std::isfinite(T)) throw_input("grid.T must be positive");
  if (nt < 2) throw_input("grid.nt must be at least 2");

  Grid g;
  g.dim_ = dim;
  g.T_ = T;
  g.nt_ = nt;
  g.tau_ = T / (nt - 1);
  g.space_size_ = 1;
  for (int a = 0; a < kMaxDim; ++a) {
    if (a >= dim) {
      g.extent_[a] = Interval{0.0, 0.0};
      g.nx_[a] = 1;
      g.h_[a] = 0.0;
      continue;
    }
    const Interval iv = per_axis(extent, a, "grid.extent");
    const int n = per_axis(nx, a, "grid.nx");
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.hi > iv.lo)) {
      throw_input("grid.extent: degenerate interval on axis " + std::to_string(a));
    }
    if (n < 3) throw_input("grid.nx must be at least 3");
    g.extent_[a] = iv;
    g.nx_[a] = n;
    g.h_[a] = (iv.hi - iv.lo) / (n - 1);
    g.space_size_ *= static_cast<std::size_t>(n);
  }
  return g;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= h_[a];
  return v;
}

std::array<int, kMaxDim> Grid::space_coords(std::size_t s) const {
  const auto n0 = static_cast<std::size_t>(nx_[0]);
  return {static_cast<int>(s % n0), static_cast<int>(s / n0)};
}

Vec Grid::point(std::size_t s) const {
  const auto c = space_coords(s);
  Vec x{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) {
    x[a] = c[a] == nx_[a] - 1 ? extent_[a].hi : coord(a, c[a]);
  }
  return x;
}

bool Grid::on_lateral(std::size_t s) const {
  const auto c = space_coords(s);
  for (int a = 0; a < dim_; ++a) {
    if (c[a] == 0 || c[a] == nx_[a] - 1) return true;
  }
  return false;
}

BoundaryMask classify_boundary(const Grid& grid) {
  BoundaryMask mask(grid.size(), NodeClass::kInterior);
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      if (k == 0 || grid.on_lateral(s)) {
        mask[grid.index(k, s)] = NodeClass::kParabolicBoundary;
      }
    }
  }
  return mask;
}

double smoothstep5(double r) {
  r = std::clamp(r, 0.0, 1.0);
  return r * r * r * (r * (6.0 * r - 15.0) + 10.0);
}

double smoothstep5_slope(double r) {
  if (r <= 0.0 || r >= 1.0) return 0.0;
  const double q = r * (1.0 - r);
  return 30.0 * q * q;
}

Cutoff::Cutoff(const Grid& grid, double margin) : grid_(grid), margin_(margin) {
  double half = INFINITY;
  for (int a = 0; a < grid.dim(); ++a) {
    half = std::min(half, 0.5 * (grid.hi(a) - grid.lo(a)));
  }
  if (!(margin > 0.0) || !(margin < half)) {
    throw_input("cutoff.margin must lie in (0, half the smallest extent)");
  }
}

double Cutoff::axis_value(int axis, double x) const {
  const double d = std::min(x - grid_.lo(axis), grid_.hi(axis) - x);
  return smoothstep5((d - margin_) / margin_);
}

double Cutoff::axis_slope(int axis, double x) const {
  const double left = x - grid_.lo(axis);
  const double right = grid_.hi(axis) - x;
  const double d = std::min(left, right);
  const double sign = left <= right ? 1.0 : -1.0;
  return sign * smoothstep5_slope((d - margin_) / margin_) / margin_;
}

double Cutoff::value(const Vec& x) const {
  double z = 1.0;
  for (int a = 0; a < grid_.dim(); ++a) z *= axis_value(a, x[a]);
  return z;
}

Vec Cutoff::gradient(const Vec& x) const {
  Vec g{0.0, 0.0};
  for (int a = 0; a < grid_.dim(); ++a) {
    double c = axis_slope(a, x[a]);
    for (int b = 0; b < grid_.dim(); ++b) {
      if (b != a) c *= axis_value(b, x[b]);
    }
    g[a] = c;
  }
  return g;
}

double Cutoff::gradient_bound() const {
  return std::sqrt(static_cast<double>(grid_.dim())) * (15.0 / 8.0) / margin_;
}

std::vector<double> Cutoff::sample() const {
  std::vector<double> z(grid_.space_size());
  for (std::size_t s = 0; s < z.size(); ++s) z[s] = value(grid_.point(s));
  return z;
}

Cutoff bump_cutoff(const Grid& grid, double margin) { return Cutoff(grid, margin); }

}  // namespace pobs
