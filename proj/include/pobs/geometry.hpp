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

#ifndef POBS_GEOMETRY_HPP
#define POBS_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pobs {

inline constexpr int kMaxDim = 2;

/// Point or vector in space. One-dimensional grids only use component 0.
using Vec = std::array<double, kMaxDim>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Uniform Cartesian grid on a box crossed with [0, T].
///
/// Nodes are ordered lexicographically in (k, s): time level k is the slow
/// index and the spatial index s runs x-fastest. The object is a small
/// trivially copyable value.
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  int nx(int axis) const { return nx_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double lo(int axis) const { return extent_[axis].lo; }
  double hi(int axis) const { return extent_[axis].hi; }
  const Interval& extent(int axis) const { return extent_[axis]; }
  double T() const { return T_; }
  int nt() const { return nt_; }
  double tau() const { return tau_; }

  /// Spatial nodes per time level.
  std::size_t space_size() const { return space_size_; }
  /// Total nodes in the space-time grid.
  std::size_t size() const { return space_size_ * static_cast<std::size_t>(nt_); }
  /// Product of the spatial steps (the volume of one spatial cell).
  double cell_volume() const;

  std::size_t index(int k, std::size_t s) const {
    return static_cast<std::size_t>(k) * space_size_ + s;
  }
  std::size_t space_index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_[0]) +
           static_cast<std::size_t>(i);
  }
  std::array<int, kMaxDim> space_coords(std::size_t s) const;

  double coord(int axis, int i) const { return extent_[axis].lo + i * h_[axis]; }
  double t(int k) const { return k == nt_ - 1 ? T_ : k * tau_; }
  Vec point(std::size_t s) const;

  /// True when the spatial node lies on the boundary of the box.
  bool on_lateral(std::size_t s) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid build_grid(int, const std::vector<Interval>&, const std::vector<int>&,
                         double, int);

  int dim_ = 1;
  std::array<Interval, kMaxDim> extent_{};
  std::array<int, kMaxDim> nx_{1, 1};
  std::array<double, kMaxDim> h_{0.0, 0.0};
  double T_ = 0.0;
  int nt_ = 0;
  double tau_ = 0.0;
  std::size_t space_size_ = 0;
};

/// Builds a grid. `extent` and `nx` hold either one entry (shared by all
/// axes) or one entry per axis. Throws Error(kInput) on dim outside {1, 2},
/// nx < 3, nt < 2, non-positive T or a degenerate extent.
Grid build_grid(int dim, const std::vector<Interval>& extent, const std::vector<int>& nx,
                double T, int nt);

enum class NodeClass : std::uint8_t {
  kInterior = 0,
  kParabolicBoundary = 1,
  // Reserved in the mask schema; classify_boundary never assigns it because
  // lateral nodes at t = T belong to the parabolic boundary.
  kFinalTimeLateral = 2,
};

using BoundaryMask = std::vector<NodeClass>;

/// Marks t = 0 nodes and lateral nodes (any t) as parabolic boundary.
BoundaryMask classify_boundary(const Grid& grid);

/// Smooth cutoff ζ(x): zero within `margin` of the boundary, one at distance
/// at least 2·margin, and a per-axis quintic smoothstep in between. The
/// per-axis factors are multiplied.
class Cutoff {
 public:
  Cutoff(const Grid& grid, double margin);

  double margin() const { return margin_; }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// Largest |∇ζ| over space (the per-axis smoothstep slope bound, 15/8 per
  /// margin, accumulated over axes).
  double gradient_bound() const;

  /// ζ sampled at every spatial node.
  std::vector<double> sample() const;

 private:
  double axis_value(int axis, double x) const;
  double axis_slope(int axis, double x) const;

  Grid grid_;
  double margin_;
};

/// Throws Error(kInput) unless 0 < margin < half the smallest extent.
Cutoff bump_cutoff(const Grid& grid, double margin);

/// Quintic smoothstep 6r⁵ − 15r⁴ + 10r³ on [0, 1], clamped outside.
double smoothstep5(double r);
double smoothstep5_slope(double r);

}  // namespace pobs

#endif  // POBS_GEOMETRY_HPP
