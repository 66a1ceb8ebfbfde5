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

#ifndef POBS_INEQ_HPP
#define POBS_INEQ_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace pobs {

struct InequalitySuite {
  std::string name;
  long samples = 0;
  long violations = 0;
  /// Largest (lhs − rhs) / rhs seen; negative when every sample holds strictly.
  double worst_slack = 0.0;
};

struct InequalityReport {
  std::vector<InequalitySuite> suites;

  bool pass() const;
  std::string to_text() const;
};

/// Relative slack allowed before a sample counts as a violation.
inline constexpr double kInequalitySlack = 1e-12;

/// Monte Carlo runs of the monotonicity inequality and the (p − 1) bound
/// (random pairs in R², p in [2, 6]) and the three-factor Young inequality
/// (p in (2, 6]). `swap_sides` tests rhs <= lhs instead, which must fail.
InequalityReport run_inequality_suites(long trials, std::uint64_t seed, bool swap_sides = false);

}  // namespace pobs

#endif  // POBS_INEQ_HPP
