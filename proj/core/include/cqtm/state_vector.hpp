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

#include <cstddef>
#include <span>
#include <vector>

#include "cqtm/types.hpp"

namespace cqtm {

/// Normalized pure state of `cells` qudits of dimension `dim`.
///
/// Amplitudes are indexed by base-`dim` strings with the leftmost cell as the
/// most significant digit. A zero-cell state is the scalar state with the
/// single amplitude 1.
class StateVector {
 public:
  StateVector();  // |>

  /// Throws if the squared norm deviates from 1 by more than `norm_tol`;
  /// otherwise rescales to unit norm.
  StateVector(std::size_t dim, std::size_t cells, Vector amplitudes,
              double norm_tol = tol::kNorm);

  static StateVector basis(std::size_t dim, std::span<const int> digits);
  static StateVector basis(std::size_t dim, std::initializer_list<int> digits);

  std::size_t dim() const { return dim_; }
  std::size_t cells() const { return cells_; }
  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  /// Digit of cell `cell` in basis index `index`.
  int digit(std::size_t index, std::size_t cell) const;

  /// Probability distribution of a single cell's basis symbol.
  std::vector<double> marginal(std::size_t cell) const;

  StateVector tensor(const StateVector& rhs) const;

  /// Reorders cells so that new cell i is old cell `order[i]`.
  StateVector permuted(std::span<const std::size_t> order) const;

  /// Multiplies by the phase that makes the largest amplitude real positive.
  StateVector phase_normalized() const;

  bool operator==(const StateVector&) const = default;

 private:
  std::size_t dim_ = 1;
  std::size_t cells_ = 0;
  Vector amps_;
};

StateVector tensor(const StateVector& a, const StateVector& b);

/// |<a|b>|^2. Throws on shape mismatch.
double fidelity(const StateVector& a, const StateVector& b);

/// Stride of `cell` in a register of `cells` cells.
std::size_t cell_stride(std::size_t dim, std::size_t cells, std::size_t cell);

}  // namespace cqtm
