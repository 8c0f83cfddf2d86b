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

#include "cqtm/transform.hpp"

namespace cqtm {

/// Unitary V on (data cells) x (outcome register) with
///   V |psi>|#...#> = sum_c (M_c |psi>) |c #...#>
/// for the k-cell transformation t. Indices are data-major: the outcome
/// register is the least significant block, one register cell per data cell,
/// with basis `outcome_register` (which must contain "#" and every outcome of
/// t). The remaining columns are completed by modified Gram-Schmidt with one
/// re-orthogonalization pass, so the result is deterministic.
Matrix dilate_admissible(const AdmissibleTransformation& t, const Alphabet& outcome_register);

/// The outcome register state |c #^(k-1)> as an index into the register block.
std::size_t outcome_register_index(const Alphabet& outcome_register, std::size_t cells,
                                   std::string_view outcome);

struct ReflectionMeasurement {
  /// R = V (x) |F><T| (x) I + V^dag (x) |T><F| (x) I over `ancilla_cells`
  /// two-level cells, T = index 0, F = index 1, ancillas least significant.
  Matrix reflection;
  /// {P_T = (I + R)/2, P_F = (I - R)/2} with outcomes "T" and "F".
  AdmissibleTransformation measurement;
};

/// Throws unless V is unitary.
ReflectionMeasurement reflection_measurement(const Matrix& v, std::size_t ancilla_cells = 1);

}  // namespace cqtm
