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

#include "pobs/fields.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "pobs/error.hpp"

namespace pobs {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInput, std::string(what) + ": non-finite value");
  }
}

// Derivative along `axis` at coordinate c given a value accessor on that axis.
template <class Get>
double axis_derivative(int c, int n, double h, Get&& u) {
  if (c == 0) return (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h);
  if (c == n - 1) return (3.0 * u(n - 1) - 4.0 * u(n - 2) + u(n - 3)) / (2.0 * h);
  return (u(c + 1) - u(c - 1)) / (2.0 * h);
}

std::size_t axis_stride(const Grid& grid, int axis) {
  return axis == 0 ? 1 : static_cast<std::size_t>(grid.nx(0));
}

}  // namespace

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw_input("ScalarField: size does not match grid");
  require_finite(values_, "ScalarField");
}

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

VectorField::VectorField(const Grid& grid, std::vector<Vec> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw_input("VectorField: size does not match grid");
  for (const Vec& v : values_) {
    for (double c : v) {
      if (!std::isfinite(c)) throw_input("VectorField: non-finite value");
    }
  }
}

std::vector<Vec> gradient(const Grid& grid, std::span<const double> slice) {
  std::vector<Vec> g(grid.space_size(), Vec{0.0, 0.0});
  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto c = grid.space_coords(s);
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t stride = axis_stride(grid, a);
      const std::size_t base = s - static_cast<std::size_t>(c[a]) * stride;
      g[s][a] = axis_derivative(c[a], grid.nx(a), grid.h(a),
                                [&](int m) { return slice[base + static_cast<std::size_t>(m) * stride]; });
    }
  }
  return g;
}

std::vector<Vec> gradient(const ScalarField& field, int k) {
  return gradient(field.grid(), field.slice(k));
}

VectorField gradient(const ScalarField& field) {
  const Grid& grid = field.grid();
  std::vector<Vec> all;
  all.reserve(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    auto g = gradient(grid, field.slice(k));
    all.insert(all.end(), g.begin(), g.end());
  }
  return VectorField(grid, std::move(all));
}

std::vector<double> divergence(const Grid& grid, std::span<const Vec> slice) {
  std::vector<double> d(grid.space_size(), 0.0);
  for (std::size_t s = 0; s < d.size(); ++s) {
    const auto c = grid.space_coords(s);
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t stride = axis_stride(grid, a);
      const std::size_t base = s - static_cast<std::size_t>(c[a]) * stride;
      d[s] += axis_derivative(c[a], grid.nx(a), grid.h(a), [&](int m) {
        return slice[base + static_cast<std::size_t>(m) * stride][a];
      });
    }
  }
  return d;
}

std::vector<double> divergence(const VectorField& field, int k) {
  return divergence(field.grid(), field.slice(k));
}

ScalarField time_diff(const ScalarField& field) {
  const Grid& grid = field.grid();
  if (grid.nt() < 3) throw_input("time_diff: needs at least 3 time levels");
  std::vector<double> out(grid.size());
  for (std::size_t s = 0; s < grid.space_size(); ++s) {
    for (int k = 0; k < grid.nt(); ++k) {
      out[grid.index(k, s)] =
          axis_derivative(k, grid.nt(), grid.tau(), [&](int m) { return field(m, s); });
    }
  }
  return ScalarField(grid, std::move(out));
}

double pairwise_sum(std::span<const double> terms) {
  constexpr std::size_t kLeaf = 16;
  if (terms.size() <= kLeaf) {
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

double quadrature_weight(const Grid& grid, int k, std::size_t s) {
  double w = grid.cell_volume() * grid.tau();
  if (k == 0 || k == grid.nt() - 1) w *= 0.5;
  const auto c = grid.space_coords(s);
  for (int a = 0; a < grid.dim(); ++a) {
    if (c[a] == 0 || c[a] == grid.nx(a) - 1) w *= 0.5;
  }
  return w;
}

double integrate(const Grid& grid, std::span<const double> f, const NodeMask* region) {
  if (f.size() != grid.size()) throw_input("integrate: size does not match grid");
  std::vector<double> terms(grid.size(), 0.0);
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const std::size_t n = grid.index(k, s);
      if (region != nullptr && (*region)[n] == 0) continue;
      terms[n] = quadrature_weight(grid, k, s) * f[n];
    }
  }
  return pairwise_sum(terms);
}

double integrate_space(const Grid& grid, std::span<const double> slice) {
  if (slice.size() != grid.space_size()) throw_input("integrate_space: size does not match grid");
  std::vector<double> terms(slice.size());
  for (std::size_t s = 0; s < slice.size(); ++s) {
    // quadrature_weight at an inner time level carries tau; strip it.
    terms[s] = quadrature_weight(grid, 1, s) / grid.tau() * slice[s];
  }
  return pairwise_sum(terms);
}

namespace {

template <class Magnitude>
double lq_norm_impl(const Grid& grid, double q, const NormOptions& opts, Magnitude&& mag) {
  if (!(q >= 1.0)) throw_input("lq_norm: q must be at least 1");
  const bool x_only = opts.weight.size() == grid.space_size();
  if (!opts.weight.empty() && !x_only && opts.weight.size() != grid.size()) {
    throw_input("lq_norm: weight size does not match grid");
  }
  if (opts.region != nullptr && opts.region->size() != grid.size()) {
    throw_input("lq_norm: region size does not match grid");
  }
  std::vector<double> terms(grid.size(), 0.0);
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const std::size_t n = grid.index(k, s);
      if (opts.region != nullptr && (*opts.region)[n] == 0) continue;
      double w = quadrature_weight(grid, k, s);
      if (!opts.weight.empty()) w *= x_only ? opts.weight[s] : opts.weight[n];
      const double m = mag(n);
      if (m == 0.0 || w == 0.0) continue;
      terms[n] = w * (q == 1.0 ? m : q == 2.0 ? m * m : std::pow(m, q));
    }
  }
  const double sum = pairwise_sum(terms);
  return q == 1.0 ? sum : q == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / q);
}

}  // namespace

double lq_norm(const ScalarField& field, double q, const NormOptions& opts) {
  const auto v = field.values();
  return lq_norm_impl(field.grid(), q, opts, [&](std::size_t n) { return std::abs(v[n]); });
}

double lq_norm(const VectorField& field, double q, const NormOptions& opts) {
  const auto v = field.values();
  return lq_norm_impl(field.grid(), q, opts,
                      [&](std::size_t n) { return std::hypot(v[n][0], v[n][1]); });
}

ShiftedField shift(const ScalarField& field, int axis, int steps) {
  const Grid& grid = field.grid();
  if (axis < 0 || axis >= grid.dim()) throw_input("shift: axis out of range");
  std::vector<double> out(grid.size(), 0.0);
  NodeMask valid(grid.size(), 0);
  const auto stride = static_cast<std::ptrdiff_t>(axis_stride(grid, axis));
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const int src = grid.space_coords(s)[axis] + steps;
      if (src < 0 || src >= grid.nx(axis)) continue;
      const auto from = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s) + steps * stride);
      out[grid.index(k, s)] = field(k, from);
      valid[grid.index(k, s)] = 1;
    }
  }
  return {ScalarField(grid, std::move(out)), std::move(valid)};
}

ShiftedField shift(const ScalarField& field, int axis, double increment) {
  const Grid& grid = field.grid();
  if (axis < 0 || axis >= grid.dim()) throw_input("shift: axis out of range");
  const double steps = std::round(increment / grid.h(axis));
  if (std::abs(increment - steps * grid.h(axis)) > 1e-9 * grid.h(axis)) {
    throw_input("shift: increment is not a multiple of the grid step");
  }
  return shift(field, axis, static_cast<int>(steps));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Grid& grid,
               const std::vector<std::pair<std::string, std::span<const double>>>& columns) {
  for (const auto& [name, data] : columns) {
    if (data.size() != grid.size()) throw_input("write_csv: column '" + name + "' has wrong size");
  }
  os << "t,x";
  if (grid.dim() == 2) os << ",y";
  for (const auto& col : columns) os << ',' << col.first;
  os << '\n';
  for (int k = 0; k < grid.nt(); ++k) {
    const std::string t = format_double(grid.t(k));
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const Vec x = grid.point(s);
      os << t << ',' << format_double(x[0]);
      if (grid.dim() == 2) os << ',' << format_double(x[1]);
      for (const auto& col : columns) os << ',' << format_double(col.second[grid.index(k, s)]);
      os << '\n';
    }
  }
}

void write_csv(std::ostream& os, const ScalarField& field, const std::string& name) {
  write_csv(os, field.grid(), {{name, field.values()}});
}

}  // namespace pobs
