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

#include "pobs/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pobs/error.hpp"
#include "pobs/pflux.hpp"

namespace pobs {

namespace {

class ConstantObstacle final : public Obstacle {
 public:
  explicit ConstantObstacle(double value) : value_(value) {}
  std::string id() const override { return "constant"; }
  double psi(const Vec&, double) const override { return value_; }
  double psi_t(const Vec&, double) const override { return 0.0; }
  Vec grad(const Vec&, double) const override { return {0.0, 0.0}; }
  Vec grad_t(const Vec&, double) const override { return {0.0, 0.0}; }
  Mat hess(const Vec&, double) const override { return {0.0, 0.0, 0.0, 0.0}; }

 private:
  double value_;
};

// ℓ(x) − depth·g(t)·Π_a g(x_a − lo_a)·g(hi_a − x_a) with g(s) = 1 − exp(−s/layer).
// The affine function ℓ is the solution and the obstacle stays strictly below
// it away from the parabolic boundary.
class AffineInactiveObstacle final : public Obstacle {
 public:
  AffineInactiveObstacle(const Grid& grid, const ObstacleParams& p)
      : grid_(grid),
        offset_(p.at("offset")),
        slope_{p.at("slope"), p.at("slope_y")},
        depth_(p.at("depth")),
        layer_(p.at("layer")) {
    if (!(layer_ > 0.0)) throw_input("obstacle.layer must be positive");
    if (depth_ < 0.0) throw_input("obstacle.depth must be nonnegative");
  }

  std::string id() const override { return "affine-inactive"; }

  double psi(const Vec& x, double t) const override {
    return affine(x) - depth_ * g(t) * space_product(x);
  }
  double psi_t(const Vec& x, double t) const override {
    return -depth_ * dg(t) * space_product(x);
  }
  Vec grad(const Vec& x, double t) const override {
    Vec r{0.0, 0.0};
    for (int a = 0; a < grid_.dim(); ++a) {
      r[a] = slope_[a] - depth_ * g(t) * axis_d1(a, x[a]) * others(a, x);
    }
    return r;
  }
  Vec grad_t(const Vec& x, double t) const override {
    Vec r{0.0, 0.0};
    for (int a = 0; a < grid_.dim(); ++a) {
      r[a] = -depth_ * dg(t) * axis_d1(a, x[a]) * others(a, x);
    }
    return r;
  }
  Mat hess(const Vec& x, double t) const override {
    Mat m{0.0, 0.0, 0.0, 0.0};
    const double c = -depth_ * g(t);
    for (int a = 0; a < grid_.dim(); ++a) {
      m[static_cast<std::size_t>(3 * a)] = c * axis_d2(a, x[a]) * others(a, x);
    }
    if (grid_.dim() == 2) {
      m[1] = m[2] = c * axis_d1(0, x[0]) * axis_d1(1, x[1]);
    }
    return m;
  }

 private:
  double affine(const Vec& x) const {
    double v = offset_;
    for (int a = 0; a < grid_.dim(); ++a) v += slope_[a] * x[a];
    return v;
  }
  double g(double s) const { return -std::expm1(-s / layer_); }
  double dg(double s) const { return std::exp(-s / layer_) / layer_; }
  double ddg(double s) const { return -std::exp(-s / layer_) / (layer_ * layer_); }

  double axis(int a, double x) const { return g(x - grid_.lo(a)) * g(grid_.hi(a) - x); }
  double axis_d1(int a, double x) const {
    const double l = x - grid_.lo(a);
    const double r = grid_.hi(a) - x;
    return dg(l) * g(r) - g(l) * dg(r);
  }
  double axis_d2(int a, double x) const {
    const double l = x - grid_.lo(a);
    const double r = grid_.hi(a) - x;
    return ddg(l) * g(r) - 2.0 * dg(l) * dg(r) + g(l) * ddg(r);
  }
  double space_product(const Vec& x) const {
    double v = 1.0;
    for (int a = 0; a < grid_.dim(); ++a) v *= axis(a, x[a]);
    return v;
  }
  double others(int skip, const Vec& x) const {
    double v = 1.0;
    for (int a = 0; a < grid_.dim(); ++a) {
      if (a != skip) v *= axis(a, x[a]);
    }
    return v;
  }

  Grid grid_;
  double offset_;
  Vec slope_;
  double depth_;
  double layer_;
};

// amplitude · a(t) · (1 − curvature·|x − c(t)|²) with c(t) = center + velocity·t·e_0.
// a ≡ 1 for the parabolic and traveling humps, a(t) = max(0, t0 − t) for the
// shrinking hump.
class HumpObstacle final : public Obstacle {
 public:
  enum class Kind { kParabolic, kShrinking, kTraveling };

  HumpObstacle(Kind kind, int dim, const ObstacleParams& p)
      : kind_(kind),
        dim_(dim),
        amplitude_(p.at("amplitude")),
        curvature_(p.at("curvature")),
        center_(p.at("center")),
        velocity_(kind == Kind::kTraveling ? p.at("velocity") : 0.0),
        t0_(kind == Kind::kShrinking ? p.at("t0") : 0.0) {
    if (kind == Kind::kShrinking && !(t0_ > 0.0)) throw_input("obstacle.t0 must be positive");
  }

  std::string id() const override {
    switch (kind_) {
      case Kind::kParabolic: return "parabolic-hump";
      case Kind::kShrinking: return "shrinking-hump";
      case Kind::kTraveling: return "traveling-hump";
    }
    return {};
  }

  double psi(const Vec& x, double t) const override {
    return amplitude_ * amp(t) * profile(offset(x, t));
  }
  double psi_t(const Vec& x, double t) const override {
    const Vec z = offset(x, t);
    // d/dt profile(z) with dz_0/dt = −velocity.
    const double dprofile = 2.0 * curvature_ * z[0] * velocity_;
    return amplitude_ * (amp_t(t) * profile(z) + amp(t) * dprofile);
  }
  Vec grad(const Vec& x, double t) const override {
    const Vec z = offset(x, t);
    const double c = -2.0 * amplitude_ * curvature_ * amp(t);
    return {c * z[0], dim_ == 2 ? c * z[1] : 0.0};
  }
  Vec grad_t(const Vec& x, double t) const override {
    const Vec z = offset(x, t);
    const double c = -2.0 * amplitude_ * curvature_;
    Vec r{c * amp_t(t) * z[0], dim_ == 2 ? c * amp_t(t) * z[1] : 0.0};
    r[0] += -c * amp(t) * velocity_;
    return r;
  }
  Mat hess(const Vec&, double t) const override {
    const double c = -2.0 * amplitude_ * curvature_ * amp(t);
    return {c, 0.0, 0.0, dim_ == 2 ? c : 0.0};
  }

 private:
  Vec offset(const Vec& x, double t) const {
    Vec z{x[0] - center_ - velocity_ * t, 0.0};
    if (dim_ == 2) z[1] = x[1] - center_;
    return z;
  }
  double profile(const Vec& z) const { return 1.0 - curvature_ * (z[0] * z[0] + z[1] * z[1]); }
  double amp(double t) const {
    return kind_ == Kind::kShrinking ? std::max(0.0, t0_ - t) : 1.0;
  }
  // Left derivative at the kink t = t0.
  double amp_t(double t) const {
    return kind_ == Kind::kShrinking && t <= t0_ ? -1.0 : 0.0;
  }

  Kind kind_;
  int dim_;
  double amplitude_;
  double curvature_;
  double center_;
  double velocity_;
  double t0_;
};

}  // namespace

const std::vector<std::string>& obstacle_catalog() {
  static const std::vector<std::string> ids{"constant", "affine-inactive", "parabolic-hump",
                                            "shrinking-hump", "traveling-hump"};
  return ids;
}

ObstacleParams obstacle_defaults(std::string_view id) {
  if (id == "constant") return {{"value", 0.0}};
  if (id == "affine-inactive") {
    return {{"offset", 0.0}, {"slope", 1.0}, {"slope_y", 0.0}, {"depth", 1.0}, {"layer", 0.02}};
  }
  ObstacleParams hump{{"amplitude", 1.0}, {"curvature", 10.0}, {"center", 0.5}};
  if (id == "parabolic-hump") return hump;
  if (id == "shrinking-hump") {
    hump["t0"] = 0.5;
    return hump;
  }
  if (id == "traveling-hump") {
    hump["velocity"] = 0.5;
    return hump;
  }
  throw_input("unknown obstacle id '" + std::string(id) + "'");
}

std::shared_ptr<const Obstacle> make_obstacle(std::string_view id, const ObstacleParams& params,
                                              const Grid& grid) {
  ObstacleParams p = obstacle_defaults(id);
  for (const auto& [key, value] : params) {
    if (p.find(key) == p.end()) {
      throw_input("obstacle '" + std::string(id) + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw_input("obstacle." + key + " must be finite");
    p[key] = value;
  }
  if (id == "constant") return std::make_shared<ConstantObstacle>(p.at("value"));
  if (id == "affine-inactive") return std::make_shared<AffineInactiveObstacle>(grid, p);
  using Kind = HumpObstacle::Kind;
  if (id == "parabolic-hump") return std::make_shared<HumpObstacle>(Kind::kParabolic, grid.dim(), p);
  if (id == "shrinking-hump") return std::make_shared<HumpObstacle>(Kind::kShrinking, grid.dim(), p);
  return std::make_shared<HumpObstacle>(Kind::kTraveling, grid.dim(), p);
}

void check_obstacle_consistency(const Obstacle& obstacle, const Grid& grid, std::uint64_t seed,
                                int probes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double scale = 0.0;
  for (int a = 0; a < grid.dim(); ++a) scale = std::max(scale, grid.hi(a) - grid.lo(a));
  scale = std::max(scale, grid.T());
  const double d = 1e-6 * scale;
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-5 * (1.0 + std::abs(a) + std::abs(b)); };
  auto fail = [&](const char* what) {
    throw_input("obstacle '" + obstacle.id() + "': " + what + " inconsistent with finite differences");
  };

  for (int n = 0; n < probes; ++n) {
    Vec x{0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) {
      const double len = grid.hi(a) - grid.lo(a);
      x[a] = grid.lo(a) + len * (0.01 + 0.98 * unit(rng));
    }
    const double t = grid.T() * (0.01 + 0.98 * unit(rng));

    const double ft = (obstacle.psi(x, t + d) - obstacle.psi(x, t - d)) / (2.0 * d);
    if (!close(ft, obstacle.psi_t(x, t))) fail("psi_t");

    const Vec g = obstacle.grad(x, t);
    const Vec gt = obstacle.grad_t(x, t);
    const Mat hs = obstacle.hess(x, t);
    const Vec gtp = obstacle.grad(x, t + d);
    const Vec gtm = obstacle.grad(x, t - d);
    for (int a = 0; a < grid.dim(); ++a) {
      Vec xp = x;
      Vec xm = x;
      xp[a] += d;
      xm[a] -= d;
      const double fx = (obstacle.psi(xp, t) - obstacle.psi(xm, t)) / (2.0 * d);
      if (!close(fx, g[a])) fail("grad");
      if (!close((gtp[a] - gtm[a]) / (2.0 * d), gt[a])) fail("grad_t");
      const Vec gp = obstacle.grad(xp, t);
      const Vec gm = obstacle.grad(xm, t);
      for (int b = 0; b < grid.dim(); ++b) {
        if (!close((gp[b] - gm[b]) / (2.0 * d), hs[static_cast<std::size_t>(2 * a + b)])) {
          fail("hess");
        }
      }
    }
  }
}

ObstacleSamples sample_obstacle(const Obstacle& obstacle, const Grid& grid) {
  std::vector<Vec> g(grid.size());
  std::vector<Vec> gt(grid.size());
  std::vector<Mat> hs(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const Vec x = grid.point(s);
      const std::size_t n = grid.index(k, s);
      g[n] = obstacle.grad(x, t);
      gt[n] = obstacle.grad_t(x, t);
      hs[n] = obstacle.hess(x, t);
    }
  }
  return {ScalarField::sample(grid, [&](const Vec& x, double t) { return obstacle.psi(x, t); }),
          ScalarField::sample(grid, [&](const Vec& x, double t) { return obstacle.psi_t(x, t); }),
          VectorField(grid, std::move(g)), VectorField(grid, std::move(gt)), std::move(hs)};
}

ScalarField exact_p_laplacian(const Obstacle& obstacle, const Grid& grid, double p) {
  return ScalarField::sample(grid, [&](const Vec& x, double t) {
    return p_laplacian_exact(grid.dim(), obstacle.grad(x, t), obstacle.hess(x, t), p);
  });
}

double max_hessian_norm(const Obstacle& obstacle, const Grid& grid) {
  double m = 0.0;
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const Mat h = obstacle.hess(grid.point(s), grid.t(k));
      m = std::max(m, std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2] + h[3] * h[3]));
    }
  }
  return m;
}

}  // namespace pobs
