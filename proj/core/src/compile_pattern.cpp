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


#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>

#include "cqtm/compilers.hpp"
#include "cqtm/program_builder.hpp"

namespace cqtm {

namespace {

using namespace std::complex_literals;

// Measurement basis vector (|0> + sign e^{ia}|1>)/sqrt2 over {#,0,1}.
Vector basis_vector(double angle, int sign) {
  Vector v = Vector::Zero(3);
  v[1] = 1.0 / std::sqrt(2.0);
  v[2] = static_cast<double>(sign) * std::exp(1i * angle) / std::sqrt(2.0);
  return v;
}

Vector blank_vector() {
  Vector v = Vector::Zero(3);
  v[0] = 1.0;
  return v;
}

// Unitary exchanging |#> and `v`, fixing `w` (v, w orthonormal on {0,1}).
Matrix exchange_with_blank(const Vector& v, const Vector& w) {
  const Vector e = blank_vector();
  return e * v.adjoint() + v * e.adjoint() + w * w.adjoint();
}

}  // namespace

long pattern_cell(const PatternDescription& p, std::size_t vertex) {
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (p.inputs[i] == vertex) return static_cast<long>(i) + 1;
  }
  long cell = static_cast<long>(p.inputs.size());
  for (auto v : p.vertices) {
    if (std::find(p.inputs.begin(), p.inputs.end(), v) != p.inputs.end()) continue;
    ++cell;
    if (v == vertex) return cell;
  }
  throw Error("vertex " + std::to_string(vertex) + " is not in the pattern");
}

MachineDescription compile_pattern_to_cqtm(const PatternDescription& p) {
  validate_pattern(p);
  MachineDescription m;
  m.name = "pattern_cqtm";
  m.tape_count = 2;
  m.initial = "s";
  m.quantum = Alphabet{"#", "0", "1"};
  m.classical = with_reserved_outcomes(Alphabet{"0", "1"});
  m.add_transform("Swap", make_swap(m.quantum), {0, 1});
  m.add_transform("Prep", make_unitary(3, exchange_with_blank(basis_vector(0.0, 1), basis_vector(0.0, -1)), "Prep"));
  const auto& gates = standard_gates();
  m.add_transform("CZ", make_unitary(3, extend_qubit_operator(gates.at("CZ")), "CZ"), {0, 1});
  m.add_transform("X", make_unitary(3, extend_qubit_operator(gates.at("X")), "X"));
  m.add_transform("Z", make_unitary(3, extend_qubit_operator(gates.at("Z")), "Z"));
  add_blank_tests(m);

  // One measurement and two resets per distinct angle.
  std::map<double, std::size_t> angle_ids;
  for (const auto& c : p.commands) {
    if (c.op != PatternOp::kMeasure || angle_ids.count(c.angle)) continue;
    const std::size_t id = angle_ids.size();
    angle_ids[c.angle] = id;
    const Vector plus = basis_vector(c.angle, 1);
    const Vector minus = basis_vector(c.angle, -1);
    const Vector blank = blank_vector();
    const std::string k = std::to_string(id);
    m.add_transform("M" + k, make_observable(3, {{"0", plus * plus.adjoint()},
                                                 {"1", minus * minus.adjoint()},
                                                 {"#", blank * blank.adjoint()}},
                                             "M" + k));
    m.add_transform("R" + k + "_0", make_unitary(3, exchange_with_blank(plus, minus)));
    m.add_transform("R" + k + "_1", make_unitary(3, exchange_with_blank(minus, plus)));
  }

  ProgramBuilder root(m, "p");
  for (auto v : p.vertices) {
    if (std::find(p.inputs.begin(), p.inputs.end(), v) != p.inputs.end()) continue;
    root.apply_at_tape1(pattern_cell(p, v), "Prep");
  }
  const long out_base = static_cast<long>(p.vertices.size()) + 1;

  std::function<void(ProgramBuilder&, std::size_t, std::map<std::size_t, int>&)> emit =
      [&](ProgramBuilder& b, std::size_t from, std::map<std::size_t, int>& bits) {
        for (std::size_t i = from; i < p.commands.size(); ++i) {
          const auto& c = p.commands[i];
          const long a = pattern_cell(p, c.a);
          switch (c.op) {
            case PatternOp::kEntangle: {
              const long bcell = pattern_cell(p, c.b);
              b.apply_at_tape1(bcell, "Swap");
              b.apply_at_tape1(a, "CZ");
              b.apply_at_tape1(bcell, "Swap");
              break;
            }
            case PatternOp::kCorrectX:
            case PatternOp::kCorrectZ: {
              int parity = 0;
              for (auto s : c.signals) parity ^= bits.at(s);
              b.apply_at_tape1(a, parity ? (c.op == PatternOp::kCorrectX ? "X" : "Z") : "-");
              break;
            }
            case PatternOp::kMeasure: {
              const std::string k = std::to_string(angle_ids.at(c.angle));
              b.apply_at_tape1(a, "M" + k);
              for (int s = 0; s < 2; ++s) {
                ProgramBuilder branch = b.fork(std::to_string(s), std::to_string(s));
                branch.step({Move::kStay, Move::kStay}, "R" + k + "_" + std::to_string(s));
                bits[c.a] = s;
                emit(branch, i + 1, bits);
                bits.erase(c.a);
              }
              return;
            }
          }
        }
        for (std::size_t k = 0; k < p.outputs.size(); ++k) {
          b.apply_at_tape1(pattern_cell(p, p.outputs[k]), "Swap");
          b.apply_at_tape1(out_base + static_cast<long>(k), "Swap");
        }
        b.halt();
      };
  std::map<std::size_t, int> bits;
  emit(root, 0, bits);
  return m;
}

}  // namespace cqtm
