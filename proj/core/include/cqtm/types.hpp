// Copyright 2026 The cqtm Authors
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

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cqtm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double kNorm = 1e-9;
inline constexpr double kCompleteness = 1e-9;
inline constexpr double kSchmidt = 1e-8;
inline constexpr double kPrune = 1e-12;
inline constexpr double kBlank = 1e-9;
inline constexpr double kFidelity = 1e-9;
}  // namespace tol

/// Reserved outcome and tape symbols, in their ASCII spelling.
namespace sym {
inline constexpr std::string_view kBlank = "#";
inline constexpr std::string_view kNonBlank = "!#";
inline constexpr std::string_view kVoid = "_";  // lambda
inline constexpr std::string_view kTop = "T";
inline constexpr std::string_view kBottom = "F";
inline constexpr std::string_view kHalt = "h";
inline constexpr std::string_view kYes = "yes";
inline constexpr std::string_view kNo = "no";
}  // namespace sym

inline bool is_halting_state(std::string_view q) {
  return q == sym::kHalt || q == sym::kYes || q == sym::kNo;
}

/// Concatenation of classical outcomes with the void outcome as unit.
std::string concat_outcomes(std::string_view a, std::string_view b);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default register cap (2^22 amplitudes), overridable through the
/// CQTM_AMPLITUDE_CAP environment variable or set_amplitude_cap().
std::size_t amplitude_cap();
void set_amplitude_cap(std::size_t cap);

/// d^n, or 0 when it exceeds `limit`.
std::size_t checked_pow(std::size_t d, std::size_t n, std::size_t limit);

}  // namespace cqtm
