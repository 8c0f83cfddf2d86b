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

#include <optional>
#include <string>

#include "cqtm/machine.hpp"
#include "cqtm/models.hpp"
#include "cqtm/state_vector.hpp"

namespace cqtm {

/// One-tape CQTM using Std and symbol permutations; every TM step becomes a
/// permutation followed by a move and a standard-basis measurement.
MachineDescription compile_tm_to_cqtm(const ClassicalTM& tm);

/// One-tape MQTM; permutations are replaced by repeat-until-success rounds
/// of a diagonal measurement followed by Std.
MachineDescription compile_tm_to_mqtm(const ClassicalTM& tm);

/// (w+1)-tape CQTM for a concrete circuit of gate width w. Qubit i sits on
/// tape-1 cell i+1; each operand is swapped onto its own tape for the gate.
MachineDescription compile_circuit_to_cqtm(const CircuitDescription& c);

/// Lifts a j-qubit operator to j cells over {#,0,1}: acts as `u` on
/// {0,1}^j and as the identity on every basis string containing '#'.
Matrix extend_qubit_operator(const Matrix& u);

/// Two-tape CQTM running the pattern. Inputs occupy cells 1..|I| in the
/// order of I; outputs end on the cells right after all pattern qubits, in
/// the order of O.
MachineDescription compile_pattern_to_cqtm(const PatternDescription& p);

/// Placement of input qubits for compile_pattern_to_cqtm (cell of the i-th
/// vertex), exposed for tests.
long pattern_cell(const PatternDescription& p, std::size_t vertex);

struct MqtmOptions {
  /// Stop after the dilation stage: unitaries on the enlarged cells plus
  /// projective outcome read-out.
  bool stage1_only = false;
};

/// k-tape MQTM simulating a k-tape CQTM on cells (symbol, outcome, flag).
MachineDescription compile_cqtm_to_mqtm(const MachineDescription& m, const MqtmOptions& options = {});

/// Two-tape CQTM simulating a k-tape CQTM. Transforms on more than two cells
/// need an entry in `decompositions`.
MachineDescription compile_ktape_to_2tape(const MachineDescription& m,
                                          const Decompositions& decompositions = {});

/// Re-expresses a state over `from` in the alphabet `to`, matching symbols
/// by name. Nullopt when the support uses a symbol missing from `to`.
std::optional<StateVector> translate_state(const StateVector& s, const Alphabet& from,
                                           const Alphabet& to);

}  // namespace cqtm
