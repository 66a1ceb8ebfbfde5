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

#ifndef POBS_ERROR_HPP
#define POBS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pobs {

// Numeric values are shared with the C API status codes and the CLI exit
// codes; do not renumber.
enum class ErrorCode : int {
  kOk = 0,
  kInput = 1,
  kNonConverged = 2,
  kVerificationFailed = 3,
  kInternal = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_input(const std::string& what) {
  throw Error(ErrorCode::kInput, what);
}

}  // namespace pobs

#endif  // POBS_ERROR_HPP
