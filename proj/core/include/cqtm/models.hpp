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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cqtm/machine.hpp"
#include "cqtm/types.hpp"

namespace cqtm {

/// Deterministic one-tape Turing machine. The head starts on the blank cell
/// left of the input.
struct ClassicalTM {
  struct Action {
    std::string next;
    std::string write;
    Move move = Move::kStay;
  };

  std::string name = "tm";
  std::string initial = "s";
  std::vector<std::string> alphabet{"#"};
  std::map<std::pair<std::string, std::string>, Action> delta;

  const Action* find(const std::string& state, const std::string& symbol) const;
};

/// Throws Error when the machine is malformed.
void validate_tm(const ClassicalTM& tm);

struct Gate {
  std::string name;
  std::vector<std::size_t> qubits;
};

struct CircuitDescription {
  std::size_t qubits = 0;
  std::vector<Gate> gates;
  /// Gates defined in the circuit itself, on top of the standard library.
  std::map<std::string, Matrix> custom;

  const Matrix& gate_matrix(const std::string& name) const;
  std::size_t width() const;
};

/// H, X, Y, Z, S, T, CZ, CNOT.
const std::map<std::string, Matrix>& standard_gates();

void validate_circuit(const CircuitDescription& c);

enum class PatternOp { kEntangle, kMeasure, kCorrectX, kCorrectZ };

struct PatternCommand {
  PatternOp op = PatternOp::kEntangle;
  std::size_t a = 0;
  std::size_t b = 0;        // second qubit of E
  double angle = 0.0;       // radians, for M
  std::vector<std::size_t> signals;  // XOR of outcomes s_i, for X and Z
};

struct PatternDescription {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;
  std::vector<PatternCommand> commands;
};

void validate_pattern(const PatternDescription& p);

/// One piece of a decomposed transform: a transform on at most two cells
/// applied to the listed operands (0-based) of the decomposed transform.
struct DecompositionPiece {
  AdmissibleTransformation transform;
  std::vector<std::size_t> operands;
};

using Decompositions = std::map<std::string, std::vector<DecompositionPiece>>;

}  // namespace cqtm
