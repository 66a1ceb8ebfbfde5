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

#include "pobs/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <memory>
#include <sstream>

#include "pobs/error.hpp"
#include "pobs/pflux.hpp"

namespace pobs {

namespace {

double frobenius(const Mat& m) {
  return std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3]);
}

bool inner_node(const Grid& grid, int k, std::size_t s) {
  return k > 0 && !grid.on_lateral(s);
}

// Σ over nodes of weight·f, pairwise summed.
template <class F>
double integrate_nodes(const Grid& grid, F&& f) {
  std::vector<double> terms(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      terms[grid.index(k, s)] = f(k, s);
    }
  }
  return integrate(grid, terms);
}

double bump(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double a = 1.0 - z * z;
  return a * a * a * a;
}

double bump_slope(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double a = 1.0 - z * z;
  return -8.0 * z * a * a * a;
}

double radical_inverse(int n, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (n > 0) {
    r += f * (n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t CoincidenceMask::count() const {
  return static_cast<std::size_t>(std::count(xi.begin(), xi.end(), std::uint8_t{1}));
}

NodeMask CoincidenceMask::complement(const Grid& grid) const {
  NodeMask out(grid.size(), 0);
  for (int k = 0; k < grid.nt(); ++k) {
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const std::size_t n = grid.index(k, s);
      out[n] = inner_node(grid, k, s) && !xi[n];
    }
  }
  return out;
}

double default_coincidence_tol(const SolveResult& result) {
  return 100.0 * result.config.step_tol;
}

CoincidenceMask detect_coincidence(const SolveResult& result, const Obstacle& obstacle,
                                   double tol) {
  const Grid& grid = result.grid();
  CoincidenceMask mask;
  mask.tol = tol < 0.0 ? default_coincidence_tol(result) : tol;
  mask.xi.assign(grid.size(), 0);
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const double gap = result.u(k, s) - obstacle.psi(grid.point(s), t);
      mask.xi[grid.index(k, s)] = gap <= mask.tol;
    }
  }
  return mask;
}

NodeMask inner_cylinder(const Grid& grid, double margin) {
  constexpr double kSlack = 1e-12;
  NodeMask out(grid.size(), 0);
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    if (t < margin - kSlack || t > grid.T() - margin + kSlack) continue;
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const Vec x = grid.point(s);
      bool inside = true;
      for (int a = 0; a < grid.dim(); ++a) {
        if (x[a] < grid.lo(a) + margin - kSlack || x[a] > grid.hi(a) - margin + kSlack) {
          inside = false;
        }
      }
      out[grid.index(k, s)] = inside;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Theorem2Result theorem2_residual(const SolveResult& result, const Obstacle& obstacle,
                                 const CoincidenceMask& mask, double margin) {
  const Grid& grid = result.grid();
  const double p = result.config.params.p;
  Theorem2Result out;
  out.q = p / (p - 1.0);

  const ScalarField ut = time_diff(result.u);
  const ScalarField exact = exact_p_laplacian(obstacle, grid, p);
  const NodeMask region = inner_cylinder(grid, margin);

  std::vector<double> res(grid.size(), 0.0);
  std::vector<double> plap(grid.size(), 0.0);
  for (int k = 0; k < grid.nt(); ++k) {
    const auto lap = p_laplacian(grid, result.u.slice(k), result.config.params);
    const double t = grid.t(k);
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const std::size_t n = grid.index(k, s);
      if (!region[n]) continue;
      plap[n] = lap[s];
      double rhs = lap[s];
      if (mask.xi[n]) rhs += obstacle.psi_t(grid.point(s), t) - exact(k, s);
      res[n] = ut(k, s) - rhs;
    }
  }
  NormOptions opts;
  opts.region = &region;
  out.residual = ScalarField(grid, std::move(res));
  out.residual_norm = lq_norm(out.residual, out.q, opts);
  out.ut_norm = lq_norm(ut, out.q, opts);
  out.plap_norm = lq_norm(ScalarField(grid, std::move(plap)), out.q, opts);
  return out;
}

// ---------------------------------------------------------------------------

double TestFunction::value(int dim, const Vec& x, double t) const {
  double v = bump((t - t_center) / t_radius);
  for (int a = 0; a < dim && v != 0.0; ++a) v *= bump((x[a] - center[a]) / radius[a]);
  if (odd) v *= (x[0] - center[0]) / radius[0];
  return v;
}

double TestFunction::dt(int dim, const Vec& x, double t) const {
  double v = bump_slope((t - t_center) / t_radius) / t_radius;
  for (int a = 0; a < dim && v != 0.0; ++a) v *= bump((x[a] - center[a]) / radius[a]);
  if (odd) v *= (x[0] - center[0]) / radius[0];
  return v;
}

Vec TestFunction::grad(int dim, const Vec& x, double t) const {
  Vec g{0.0, 0.0};
  const double bt = bump((t - t_center) / t_radius);
  if (bt == 0.0) return g;
  std::array<double, kMaxDim> z{}, b{}, db{};
  for (int a = 0; a < dim; ++a) {
    z[a] = (x[a] - center[a]) / radius[a];
    b[a] = bump(z[a]);
    db[a] = bump_slope(z[a]) / radius[a];
  }
  for (int a = 0; a < dim; ++a) {
    double v = bt * db[a];
    for (int c = 0; c < dim; ++c) {
      if (c != a) v *= b[c];
    }
    g[a] = v;
  }
  if (odd) {
    double prod = bt;
    for (int a = 0; a < dim; ++a) prod *= b[a];
    for (int a = 0; a < dim; ++a) g[a] *= z[0];
    g[0] += prod / radius[0];
  }
  return g;
}

namespace {

SampledTestFunction sample_test(const Grid& grid, const TestFunction& fn) {
  SampledTestFunction out;
  out.fn = fn;
  out.value.resize(grid.size());
  out.dt.resize(grid.size());
  out.grad.resize(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const Vec x = grid.point(s);
      const std::size_t n = grid.index(k, s);
      out.value[n] = fn.value(grid.dim(), x, t);
      out.grad[n] = {0.0, 0.0};
    }
  }
  // Derivatives are central differences of the samples, one-sided first
  // order at the ends of each line. Against the trapezoid weights ∬ c·∂φ and
  // ∬ φ·φ_t then sum to zero.
  const auto diff = [&](std::vector<double>& dst, std::size_t first, std::size_t stride, int count,
                        double step) {
    const auto v = [&](int i) { return out.value[first + stride * static_cast<std::size_t>(i)]; };
    const int last = count - 1;
    for (int i = 1; i < last; ++i) {
      dst[first + stride * static_cast<std::size_t>(i)] = (v(i + 1) - v(i - 1)) / (2.0 * step);
    }
    dst[first] = (v(1) - v(0)) / step;
    dst[first + stride * static_cast<std::size_t>(last)] = (v(last) - v(last - 1)) / step;
  };
  for (std::size_t s = 0; s < grid.space_size(); ++s) {
    diff(out.dt, grid.index(0, s), grid.space_size(), grid.nt(), grid.tau());
  }
  std::vector<double> d(grid.size());
  std::size_t stride = 1;
  for (int a = 0; a < grid.dim(); ++a) {
    const int n = grid.nx(a);
    const std::size_t block = stride * static_cast<std::size_t>(n);
    for (std::size_t base = 0; base < grid.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) diff(d, base + off, stride, n, grid.h(a));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) out.grad[i][a] = d[i];
    stride = block;
  }
  return out;
}

}  // namespace

TestFunctionSet TestFunctionSet::build(const Grid& grid, int count) {
  if (count < 1) throw_input("test function set: count must be positive");
  static constexpr int kBases[] = {2, 3, 5};
  TestFunctionSet set;
  for (int j = 0; j < count; ++j) {
    TestFunction fn;
    // Skip the first Halton point (all zeros).
    const int n = j + 1;
    for (int a = 0; a < grid.dim(); ++a) {
      const double len = grid.hi(a) - grid.lo(a);
      fn.center[a] = grid.lo(a) + len * (0.25 + 0.5 * radical_inverse(n, kBases[a + 1]));
      fn.radius[a] = 0.2 * len;
    }
    fn.t_center = grid.T() * (0.25 + 0.5 * radical_inverse(n, kBases[0]));
    fn.t_radius = 0.2 * grid.T();
    set.nonneg_.push_back(sample_test(grid, fn));
    fn.odd = true;
    set.odd_.push_back(sample_test(grid, fn));
  }
  return set;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vec> flux_field(const SolveResult& result) {
  const Grid& grid = result.grid();
  const PParams& params = result.config.params;
  const VectorField g = gradient(result.u);
  std::vector<Vec> out(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) out[n] = flux_eps(g.values()[n], params);
  return out;
}

double vi_slack_with(const Grid& grid, std::span<const Vec> flux, const ScalarField& ut,
                     const SampledTestFunction& phi, double s) {
  const double bulk = integrate_nodes(grid, [&](int k, std::size_t sp) {
    const std::size_t n = grid.index(k, sp);
    const double v = s * phi.value[n];
    return s * dot(flux[n], phi.grad[n]) + v * (ut(k, sp) + s * phi.dt[n]);
  });
  std::vector<double> last(grid.space_size());
  const int K = grid.nt() - 1;
  for (std::size_t sp = 0; sp < grid.space_size(); ++sp) {
    const double v = s * phi.value[grid.index(K, sp)];
    last[sp] = 0.5 * v * v;
  }
  return bulk - integrate_space(grid, last);
}

}  // namespace

double vi_slack(const SolveResult& result, const SampledTestFunction& phi, double s) {
  const auto flux = flux_field(result);
  return vi_slack_with(result.grid(), flux, time_diff(result.u), phi, s);
}

ViResult vi_residual(const SolveResult& result, const ScalarField& psi,
                     const TestFunctionSet& tests, double step) {
  const Grid& grid = result.grid();
  if (!(psi.grid() == grid)) throw_input("vi_residual: obstacle samples on a different grid");
  if (!(step > 0.0)) throw_input("vi_residual: step must be positive");
  const auto flux = flux_field(result);
  const ScalarField ut = time_diff(result.u);
  ViResult out;
  out.min_slack = std::numeric_limits<double>::infinity();
  const auto& members = tests.nonnegative();
  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto& phi = members[j];
    bool admissible = true;
    for (std::size_t n = 0; n < grid.size() && admissible; ++n) {
      admissible = result.u.values()[n] - step * phi.value[n] >= psi.values()[n];
    }
    for (double s : {step, -step}) {
      if (s < 0.0 && !admissible) {
        out.skipped.push_back(j);
        continue;
      }
      const double slack = vi_slack_with(grid, flux, ut, phi, s);
      out.entries.push_back({j, s, slack});
      out.min_slack = std::min(out.min_slack, slack);
    }
  }
  if (out.entries.empty()) out.min_slack = 0.0;
  return out;
}

SupersolutionResult supersolution_test(const SolveResult& result, const TestFunctionSet& tests) {
  const Grid& grid = result.grid();
  const auto flux = flux_field(result);
  SupersolutionResult out;
  out.min_integral = std::numeric_limits<double>::infinity();
  for (const auto& phi : tests.nonnegative()) {
    const double v = integrate_nodes(grid, [&](int k, std::size_t s) {
      const std::size_t n = grid.index(k, s);
      return dot(flux[n], phi.grad[n]) - result.u(k, s) * phi.dt[n];
    });
    out.integrals.push_back(v);
    out.min_integral = std::min(out.min_integral, v);
  }
  if (out.integrals.empty()) out.min_integral = 0.0;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<EpsRow> eps_convergence_study(const Grid& grid, const Obstacle& obstacle,
                                          SolverConfig config, std::span<const double> eps_list,
                                          const SolveResult* reference) {
  const double p = config.params.p;
  SolveResult ref_storage;
  if (reference == nullptr || !(reference->grid() == grid) || reference->eps() != 0.0) {
    SolverConfig c = config;
    c.params.eps = 0.0;
    ref_storage = solve(grid, obstacle, c);
    reference = &ref_storage;
  }
  const VectorField ref_grad = gradient(reference->u);

  std::vector<std::future<EpsRow>> jobs;
  for (double eps : eps_list) {
    if (!(eps >= 0.0)) throw_input("eps list: values must be nonnegative");
    jobs.push_back(std::async(std::launch::async, [&, eps] {
      EpsRow row;
      row.eps = eps;
      SolverConfig c = config;
      c.params.eps = eps;
      const SolveResult r = eps == 0.0 ? *reference : solve(grid, obstacle, c);
      row.converged = r.converged();
      std::vector<double> du(grid.size());
      std::vector<Vec> dg(grid.size());
      const VectorField g = gradient(r.u);
      for (std::size_t n = 0; n < grid.size(); ++n) {
        du[n] = r.u.values()[n] - reference->u.values()[n];
        dg[n] = minus(g.values()[n], ref_grad.values()[n]);
      }
      row.u_diff = lq_norm(ScalarField(grid, std::move(du)), p);
      row.grad_diff = lq_norm(VectorField(grid, std::move(dg)), p);
      return row;
    }));
  }
  std::vector<EpsRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

bool eps_study_monotone(const std::vector<EpsRow>& rows, double floor, double min_drop) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto ok = [&](double prev, double next) {
      return next <= floor || next <= (1.0 - min_drop) * prev;
    };
    if (!ok(rows[i - 1].u_diff, rows[i].u_diff)) return false;
    if (!ok(rows[i - 1].grad_diff, rows[i].grad_diff)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Theorem5Result theorem5_estimate(const SolveResult& result, const Obstacle& obstacle,
                                 const Cutoff& cutoff) {
  const Grid& grid = result.grid();
  const double p = result.config.params.p;
  const int dim = grid.dim();
  Theorem5Result out;
  out.p_in_range = p > 2.0;

  const std::vector<double> zeta = cutoff.sample();
  std::vector<double> zeta_p(grid.space_size()), dzeta_p(grid.space_size());
  for (std::size_t s = 0; s < grid.space_size(); ++s) {
    zeta_p[s] = std::pow(zeta[s], p);
    dzeta_p[s] = std::pow(norm(cutoff.gradient(grid.point(s))), p);
  }

  const VectorField g = gradient(result.u);
  std::vector<Vec> F(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) F[n] = f_map(g.values()[n], p);

  const auto dF2 = [&](int k, std::size_t s) {
    const auto c = grid.space_coords(s);
    double acc = 0.0;
    const Vec& f0 = F[grid.index(k, s)];
    for (int a = 0; a < dim; ++a) {
      const std::size_t stride = a == 0 ? 1 : static_cast<std::size_t>(grid.nx(0));
      const double inv_h = 1.0 / grid.h(a);
      double sum = 0.0;
      int parts = 0;
      if (c[a] + 1 < grid.nx(a)) {
        const auto d = scaled(minus(F[grid.index(k, s + stride)], f0), inv_h);
        sum += dot(d, d);
        ++parts;
      }
      if (c[a] > 0) {
        const auto d = scaled(minus(f0, F[grid.index(k, s - stride)]), inv_h);
        sum += dot(d, d);
        ++parts;
      }
      if (parts > 0) acc += sum / parts;
    }
    return acc;
  };

  out.lhs = integrate_nodes(grid, [&](int k, std::size_t s) {
    return zeta_p[s] == 0.0 ? 0.0 : zeta_p[s] * dF2(k, s);
  });

  out.rhs_terms[0] = integrate_nodes(grid, [&](int k, std::size_t s) {
    return (zeta_p[s] + dzeta_p[s]) * std::pow(norm(g(k, s)), p);
  });
  out.rhs_terms[1] = integrate_nodes(grid, [&](int k, std::size_t s) {
    const Vec& v = g(k, s);
    return zeta_p[s] * dot(v, v);
  });
  out.rhs_terms[2] = integrate_nodes(grid, [&](int k, std::size_t s) {
    if (dzeta_p[s] == 0.0) return 0.0;
    return dzeta_p[s] * std::pow(norm(obstacle.grad(grid.point(s), grid.t(k))), p);
  });
  out.rhs_terms[3] = integrate_nodes(grid, [&](int k, std::size_t s) {
    if (zeta_p[s] == 0.0) return 0.0;
    const Vec x = grid.point(s);
    const double t = grid.t(k);
    const Vec gt = obstacle.grad_t(x, t);
    return zeta_p[s] * (std::pow(frobenius(obstacle.hess(x, t)), p) + dot(gt, gt));
  });
  std::vector<double> last(grid.space_size());
  for (std::size_t s = 0; s < grid.space_size(); ++s) {
    const Vec gp = obstacle.grad(grid.point(s), grid.T());
    last[s] = zeta_p[s] * dot(gp, gp);
  }
  out.rhs_terms[4] = integrate_space(grid, last);

  out.rhs = 0.0;
  for (double v : out.rhs_terms) out.rhs += v;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

// ---------------------------------------------------------------------------

Corollary6Result corollary6_identity(const SolveResult& result, const TestFunctionSet& tests) {
  const Grid& grid = result.grid();
  const auto flux = flux_field(result);
  std::vector<double> lap(grid.size());
  for (int k = 0; k < grid.nt(); ++k) {
    const auto l = p_laplacian(grid, result.u.slice(k), result.config.params);
    std::copy(l.begin(), l.end(), lap.begin() + static_cast<std::ptrdiff_t>(grid.index(k, 0)));
  }
  Corollary6Result out;
  const auto visit = [&](const SampledTestFunction& phi) {
    const double a = integrate_nodes(grid, [&](int k, std::size_t s) {
      const std::size_t n = grid.index(k, s);
      return phi.value[n] * lap[n];
    });
    const double b = integrate_nodes(grid, [&](int k, std::size_t s) {
      const std::size_t n = grid.index(k, s);
      return dot(flux[n], phi.grad[n]);
    });
    const double abs_b = integrate_nodes(grid, [&](int k, std::size_t s) {
      const std::size_t n = grid.index(k, s);
      return std::abs(dot(flux[n], phi.grad[n]));
    });
    out.mismatches.push_back(std::abs(a + b));
    out.max_mismatch = std::max(out.max_mismatch, std::abs(a + b));
    out.scale = std::max(out.scale, abs_b);
  };
  for (const auto& phi : tests.nonnegative()) visit(phi);
  for (const auto& phi : tests.odd()) visit(phi);
  return out;
}

// ---------------------------------------------------------------------------

ViscosityResult viscosity_necessary_condition(const SolveResult& result, const Obstacle& obstacle,
                                              const CoincidenceMask& mask) {
  const Grid& grid = result.grid();
  const double p = result.config.params.p;
  ViscosityResult out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (int k = 1; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      if (grid.on_lateral(s) || !mask.xi[grid.index(k, s)]) continue;
      const Vec x = grid.point(s);
      const double v = obstacle.psi_t(x, t) -
                       p_laplacian_exact(grid.dim(), obstacle.grad(x, t), obstacle.hess(x, t), p);
      out.min_value = std::min(out.min_value, v);
      ++out.count;
    }
  }
  out.empty = out.count == 0;
  if (out.empty) out.min_value = 0.0;
  return out;
}

double default_viscosity_tol(const Grid& grid, const Obstacle& obstacle, double p) {
  double h = 0.0;
  for (int a = 0; a < grid.dim(); ++a) h = std::max(h, grid.h(a));
  double mt = 0.0, ml = 0.0;
  for (int k = 0; k < grid.nt(); ++k) {
    const double t = grid.t(k);
    for (std::size_t s = 0; s < grid.space_size(); ++s) {
      const Vec x = grid.point(s);
      mt = std::max(mt, std::abs(obstacle.psi_t(x, t)));
      ml = std::max(ml, std::abs(p_laplacian_exact(grid.dim(), obstacle.grad(x, t),
                                                   obstacle.hess(x, t), p)));
    }
  }
  return 10.0 * (h + grid.tau()) * (1.0 + mt + ml);
}

// ---------------------------------------------------------------------------

void VerificationReport::add(CheckRecord record) { checks_.push_back(std::move(record)); }

bool VerificationReport::all_pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> VerificationReport::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks_) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

void VerificationReport::set_meta(const std::string& key, const std::string& value) {
  for (auto& m : meta_) {
    if (m.first == key) {
      m.second = value;
      return;
    }
  }
  meta_.emplace_back(key, value);
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta_) os << k << ": " << v << '\n';
  os << '\n';
  for (const auto& c : checks_) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.note.empty()) os << "  (" << c.note << ')';
    os << '\n';
    for (const auto& [k, v] : c.metrics) os << "    " << k << " = " << fmt(v) << '\n';
  }
  const auto bad = failing();
  os << '\n' << (bad.empty() ? "all checks passed" : "failing:");
  for (const auto& b : bad) os << ' ' << b;
  os << '\n';
  return os.str();
}

std::string VerificationReport::to_kv() const {
  std::ostringstream os;
  for (const auto& [k, v] : meta_) os << "meta." << k << " = " << v << '\n';
  for (const auto& c : checks_) {
    os << c.name << ".pass = " << (c.pass ? 1 : 0) << '\n';
    for (const auto& [k, v] : c.metrics) os << c.name << '.' << k << " = " << format_double(v) << '\n';
  }
  os << "summary.pass = " << (all_pass() ? 1 : 0) << '\n';
  return os.str();
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "constraint", "vi", "supersolution", "theorem2", "theorem5", "corollary6", "viscosity", "eps"};
  return names;
}

Grid refine(const Grid& base, int level) {
  if (level < 0) throw_input("refine: negative level");
  const int f = 1 << level;
  std::vector<Interval> extent;
  std::vector<int> nx;
  for (int a = 0; a < base.dim(); ++a) {
    extent.push_back(base.extent(a));
    nx.push_back((base.nx(a) - 1) * f + 1);
  }
  return build_grid(base.dim(), extent, nx, base.T(), (base.nt() - 1) * f + 1);
}

namespace {

double max_h(const Grid& grid) {
  double h = 0.0;
  for (int a = 0; a < grid.dim(); ++a) h = std::max(h, grid.h(a));
  return h;
}

struct LevelData {
  Grid grid;
  std::shared_ptr<const Obstacle> obstacle;
  SolveResult result;
  double min_gap = 0.0;
  double boundary_gap = 0.0;
  std::optional<ViResult> vi;
  std::optional<SupersolutionResult> super;
  std::optional<Theorem2Result> t2;
  std::size_t xi_count = 0;
  std::optional<Theorem5Result> t5;
  std::optional<Corollary6Result> c6;
  std::optional<ViscosityResult> visc;
  double visc_tol = 0.0;
};

std::string level_key(std::size_t l, const char* metric) {
  return "level" + std::to_string(l) + "." + metric;
}

// The later value is smaller by at least `ratio`, or below floor.
bool decays(double prev, double next, double ratio, double floor) {
  return next <= floor || next * ratio <= prev;
}

}  // namespace

SuiteOutcome run_suite(const SuiteSpec& spec) {
  if (spec.levels < 1) throw_input("refine.levels must be at least 1");
  if (!(spec.tol_scale >= 0.0)) throw_input("checks.tol_scale must be nonnegative");
  for (const auto& c : spec.checks) {
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end()) {
      throw_input("unknown check: " + c);
    }
  }
  const auto enabled = [&](const std::string& c) {
    return spec.checks.empty() || spec.checks.count(c) > 0;
  };
  const double p = spec.config.params.p;
  const double ts = spec.tol_scale;

  std::vector<std::future<LevelData>> jobs;
  for (int l = 0; l < spec.levels; ++l) {
    jobs.push_back(std::async(std::launch::async, [&, l] {
      LevelData d;
      d.grid = refine(spec.grid, l);
      d.obstacle = make_obstacle(spec.obstacle_id, spec.obstacle_params, d.grid);
      d.result = solve(d.grid, *d.obstacle, spec.config);
      const Grid& g = d.grid;
      const Obstacle& obs = *d.obstacle;
      const ObstacleSamples smp = sample_obstacle(obs, g);
      const BoundaryMask bm = classify_boundary(g);
      d.min_gap = std::numeric_limits<double>::infinity();
      for (std::size_t n = 0; n < g.size(); ++n) {
        const double gap = d.result.u.values()[n] - smp.psi.values()[n];
        d.min_gap = std::min(d.min_gap, gap);
        if (bm[n] == NodeClass::kParabolicBoundary) {
          d.boundary_gap = std::max(d.boundary_gap, std::abs(gap));
        }
      }
      const bool need_tests = enabled("vi") || enabled("supersolution") || enabled("corollary6");
      const TestFunctionSet tests = need_tests ? TestFunctionSet::build(g) : TestFunctionSet{};
      if (enabled("vi")) d.vi = vi_residual(d.result, smp.psi, tests, spec.vi_step);
      if (enabled("supersolution")) d.super = supersolution_test(d.result, tests);
      if (enabled("theorem2") || enabled("viscosity")) {
        const CoincidenceMask mask = detect_coincidence(d.result, obs);
        d.xi_count = mask.count();
        if (enabled("theorem2")) d.t2 = theorem2_residual(d.result, obs, mask, spec.theorem2_margin);
        if (enabled("viscosity")) {
          d.visc = viscosity_necessary_condition(d.result, obs, mask);
          d.visc_tol = (max_h(g) + g.tau()) * 10.0 * (1.0 + max_hessian_norm(obs, g));
        }
      }
      if (enabled("theorem5")) d.t5 = theorem5_estimate(d.result, obs, Cutoff(g, spec.cutoff_margin));
      if (enabled("corollary6")) d.c6 = corollary6_identity(d.result, tests);
      return d;
    }));
  }
  std::vector<LevelData> data;
  for (auto& j : jobs) data.push_back(j.get());

  SuiteOutcome out;
  VerificationReport& rep = out.report;
  rep.set_meta("scenario", spec.name);
  rep.set_meta("obstacle", spec.obstacle_id);
  rep.set_meta("p", fmt(p));
  rep.set_meta("eps", fmt(spec.config.params.eps));
  rep.set_meta("levels", std::to_string(spec.levels));
  for (std::size_t l = 0; l < data.size(); ++l) {
    const Grid& g = data[l].grid;
    std::string sz = std::to_string(g.nx(0));
    if (g.dim() == 2) sz += "x" + std::to_string(g.nx(1));
    rep.set_meta("level" + std::to_string(l), "nx=" + sz + " nt=" + std::to_string(g.nt()));
    LevelSummary s;
    s.grid = g;
    s.converged = data[l].result.converged();
    s.wall_seconds = data[l].result.wall_seconds;
    if (data[l].t2) s.theorem2_residual = data[l].t2->residual_norm;
    if (data[l].t5) s.theorem5_lhs = data[l].t5->lhs;
    out.converged = out.converged && s.converged;
    out.levels.push_back(s);
  }
  const SolverConfig& resolved = data.back().result.config;
  const double noise = 100.0 * resolved.step_tol;
  out.step_tol = resolved.step_tol;

  if (enabled("constraint")) {
    CheckRecord c{"constraint", true, {}, {}};
    for (std::size_t l = 0; l < data.size(); ++l) {
      c.metrics.emplace_back(level_key(l, "min_gap"), data[l].min_gap);
      c.metrics.emplace_back(level_key(l, "boundary_gap"), data[l].boundary_gap);
      c.pass = c.pass && data[l].min_gap >= 0.0 && data[l].boundary_gap == 0.0;
    }
    rep.add(std::move(c));
  }

  const auto slack_check = [&](const char* name, auto&& get) {
    CheckRecord c{name, true, {}, {}};
    for (std::size_t l = 0; l < data.size(); ++l) {
      const Grid& g = data[l].grid;
      const double tol = 10.0 * (max_h(g) + g.tau()) * ts;
      const double v = get(data[l], c, l);
      c.metrics.emplace_back(level_key(l, "min_slack"), v);
      c.metrics.emplace_back(level_key(l, "tol"), tol);
      c.pass = c.pass && v >= -tol;
    }
    rep.add(std::move(c));
  };
  if (enabled("vi")) {
    slack_check("vi", [](const LevelData& d, CheckRecord& c, std::size_t l) {
      c.metrics.emplace_back(level_key(l, "perturbations"), static_cast<double>(d.vi->entries.size()));
      c.metrics.emplace_back(level_key(l, "skipped"), static_cast<double>(d.vi->skipped.size()));
      return d.vi->min_slack;
    });
  }
  if (enabled("supersolution")) {
    slack_check("supersolution", [](const LevelData& d, CheckRecord&, std::size_t) {
      return d.super->min_integral;
    });
  }

  if (enabled("theorem2")) {
    CheckRecord c{"theorem2", true, {}, {}};
    const double floor = noise * ts;
    for (std::size_t l = 0; l < data.size(); ++l) {
      const auto& t = *data[l].t2;
      c.metrics.emplace_back(level_key(l, "residual"), t.residual_norm);
      c.metrics.emplace_back(level_key(l, "ut_norm"), t.ut_norm);
      c.metrics.emplace_back(level_key(l, "plap_norm"), t.plap_norm);
      c.metrics.emplace_back(level_key(l, "coincidence_nodes"), static_cast<double>(data[l].xi_count));
      if (l > 0) {
        const double prev = data[l - 1].t2->residual_norm;
        const double ratio = t.residual_norm > 0.0 ? prev / t.residual_norm : 0.0;
        c.metrics.emplace_back(level_key(l, "ratio"), ratio);
        c.pass = c.pass && decays(prev, t.residual_norm, 1.3, floor);
      }
    }
    const auto& fin = *data.back().t2;
    const double scale = fin.ut_norm > noise ? fin.ut_norm : fin.plap_norm;
    const double tol = std::max(0.05 * scale * ts, floor);
    c.metrics.emplace_back("scale", scale);
    c.metrics.emplace_back("tol", tol);
    c.pass = c.pass && fin.residual_norm <= tol;
    if (!(fin.ut_norm > noise)) c.note = "u_t vanishes; scaled by the p-Laplacian norm";
    rep.add(std::move(c));
  }

  if (enabled("theorem5")) {
    CheckRecord c{"theorem5", true, {}, {}};
    double bound = 0.0;
    const double floor = noise * ts;
    for (std::size_t l = 0; l < data.size(); ++l) {
      const auto& t = *data[l].t5;
      c.metrics.emplace_back(level_key(l, "lhs"), t.lhs);
      for (std::size_t i = 0; i < t.rhs_terms.size(); ++i) {
        c.metrics.emplace_back(level_key(l, ("rhs" + std::to_string(i + 1)).c_str()), t.rhs_terms[i]);
      }
      c.metrics.emplace_back(level_key(l, "ratio"), t.ratio);
      bound = std::max(bound, t.ratio);
      c.pass = c.pass && std::isfinite(t.lhs) && std::isfinite(t.ratio);
      if (l > 0) {
        const double a = data[l - 1].t5->lhs;
        const double b = t.lhs;
        const double change = (a <= floor && b <= floor) ? 1.0 : std::max(a, b) / std::min(a, b);
        c.metrics.emplace_back(level_key(l, "lhs_change"), change);
        c.pass = c.pass && change <= 1.0 + 0.1 * ts;
      }
    }
    c.metrics.emplace_back("ratio_bound", bound);
    if (p <= 2.0) c.note = "estimate stated for p > 2";
    rep.add(std::move(c));
  }

  if (enabled("corollary6")) {
    CheckRecord c{"corollary6", true, {}, {}};
    for (std::size_t l = 0; l < data.size(); ++l) {
      const auto& t = *data[l].c6;
      const double h = max_h(data[l].grid);
      const double tol = 10.0 * h * h * (1.0 + t.scale) * ts;
      c.metrics.emplace_back(level_key(l, "mismatch"), t.max_mismatch);
      c.metrics.emplace_back(level_key(l, "scale"), t.scale);
      c.metrics.emplace_back(level_key(l, "tol"), tol);
      c.pass = c.pass && t.max_mismatch <= tol;
      if (l > 0) {
        const double prev = data[l - 1].c6->max_mismatch;
        c.metrics.emplace_back(level_key(l, "ratio"), t.max_mismatch > 0.0 ? prev / t.max_mismatch : 0.0);
        c.pass = c.pass && decays(prev, t.max_mismatch, 1.8, noise * (1.0 + t.scale) * ts);
      }
    }
    rep.add(std::move(c));
  }

  if (enabled("viscosity")) {
    CheckRecord c{"viscosity", true, {}, {}};
    bool any = false;
    for (std::size_t l = 0; l < data.size(); ++l) {
      const auto& v = *data[l].visc;
      c.metrics.emplace_back(level_key(l, "nodes"), static_cast<double>(v.count));
      c.metrics.emplace_back(level_key(l, "min"), v.min_value);
      c.metrics.emplace_back(level_key(l, "tol"), data[l].visc_tol * ts);
      any = any || !v.empty;
      c.pass = c.pass && (v.empty || v.min_value >= -data[l].visc_tol * ts);
    }
    if (!any) c.note = "coincidence set empty";
    rep.add(std::move(c));
  }

  if (enabled("eps") && !spec.eps_list.empty()) {
    const LevelData& d = data.front();
    out.eps_rows = eps_convergence_study(d.grid, *d.obstacle, spec.config, spec.eps_list,
                                         spec.config.params.eps == 0.0 ? &d.result : nullptr);
    CheckRecord c{"eps", true, {}, {}};
    for (std::size_t i = 0; i < out.eps_rows.size(); ++i) {
      const auto& r = out.eps_rows[i];
      const std::string k = "row" + std::to_string(i) + ".";
      c.metrics.emplace_back(k + "eps", r.eps);
      c.metrics.emplace_back(k + "u_diff", r.u_diff);
      c.metrics.emplace_back(k + "grad_diff", r.grad_diff);
      out.converged = out.converged && r.converged;
    }
    c.pass = eps_study_monotone(out.eps_rows, 10.0 * d.result.config.step_tol * ts);
    rep.add(std::move(c));
  }
  return out;
}

}  // namespace pobs
