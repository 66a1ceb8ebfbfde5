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

#include "pobs/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "pobs/error.hpp"
#include "pobs/pflux.hpp"

namespace pobs {

namespace {

using V2 = std::array<double, 2>;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo_exp, double hi_exp) { return std::pow(10.0, uniform(lo_exp, hi_exp)); }

  V2 vector() {
    const double r = log_uniform(-3.0, 3.0);
    const double th = uniform(0.0, 2.0 * std::numbers::pi);
    return {r * std::cos(th), r * std::sin(th)};
  }

  // Mixes independent pairs, nearby pairs, a zero endpoint and parallel pairs.
  std::pair<V2, V2> pair() {
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng_);
    const V2 a = vector();
    switch (kind) {
      case 0:
        return {a, vector()};
      case 1: {
        const double d = norm(a) * log_uniform(-3.0, 0.0);
        const double th = uniform(0.0, 2.0 * std::numbers::pi);
        return {a, V2{a[0] + d * std::cos(th), a[1] + d * std::sin(th)}};
      }
      case 2:
        return {V2{0.0, 0.0}, a};
      default:
        return {a, scaled(a, uniform(-2.0, 2.0))};
    }
  }

 private:
  std::mt19937_64 rng_;
};

void record(InequalitySuite& s, InequalitySides sides, bool swap) {
  if (swap) std::swap(sides.lhs, sides.rhs);
  ++s.samples;
  if (sides.lhs > sides.rhs * (1.0 + kInequalitySlack)) ++s.violations;
  double slack;
  if (sides.rhs > 0.0) {
    slack = (sides.lhs - sides.rhs) / sides.rhs;
  } else {
    slack = sides.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  s.worst_slack = std::max(s.worst_slack, slack);
}

}  // namespace

bool InequalityReport::pass() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const InequalitySuite& s) { return s.violations == 0; });
}

std::string InequalityReport::to_text() const {
  std::ostringstream os;
  char buf[160];
  for (const auto& s : suites) {
    std::snprintf(buf, sizeof buf, "%-12s samples=%ld violations=%ld worst_slack=%.6e\n",
                  s.name.c_str(), s.samples, s.violations, s.worst_slack);
    os << buf;
  }
  os << (pass() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

InequalityReport run_inequality_suites(long trials, std::uint64_t seed, bool swap_sides) {
  if (trials < 1) throw_input("trials must be at least 1");
  Sampler rng(seed);
  InequalitySuite mono{"monotone", 0, 0, -std::numeric_limits<double>::infinity()};
  InequalitySuite lip{"lipschitz", 0, 0, -std::numeric_limits<double>::infinity()};
  InequalitySuite young{"young", 0, 0, -std::numeric_limits<double>::infinity()};
  for (long i = 0; i < trials; ++i) {
    const double p = rng.uniform(2.0, 6.0);
    const auto [a, b] = rng.pair();
    record(mono, monotonicity_lhs_rhs(a, b, p), swap_sides);
    record(lip, lipschitz_bound_lhs_rhs(a, b, p), swap_sides);
  }
  for (long i = 0; i < trials; ++i) {
    double p = rng.uniform(2.0, 6.0);
    if (p == 2.0) p = 6.0;
    const double x = rng.log_uniform(-2.0, 2.0);
    const double y = rng.log_uniform(-2.0, 2.0);
    const double z = rng.log_uniform(-2.0, 2.0);
    const double e = rng.log_uniform(-1.0, 1.0);
    record(young, young3(x, y, z, p, e), swap_sides);
  }
  return {{mono, lip, young}};
}

}  // namespace pobs
