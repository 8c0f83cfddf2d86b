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


#include <optional>

#include "cqtm/compilers.hpp"
#include "cqtm/program_builder.hpp"

namespace cqtm {

Matrix extend_qubit_operator(const Matrix& u) {
  const auto j = log_dim(2, static_cast<std::size_t>(u.rows()));
  if (!j || u.rows() != u.cols()) throw Error("extend_qubit_operator: not a qubit operator");
  const std::size_t side = op_side(3, *j);
  Matrix out = Matrix::Identity(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  // Basis index over {#,0,1}^j for a bit string.
  auto lift = [&](std::size_t bits) {
    std::size_t idx = 0;
    for (std::size_t c = 0; c < *j; ++c) {
      const std::size_t bit = (bits >> (*j - 1 - c)) & 1U;
      idx = idx * 3 + 1 + bit;
    }
    return static_cast<Eigen::Index>(idx);
  };
  const std::size_t n = std::size_t{1} << *j;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(lift(r), lift(c)) = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

MachineDescription compile_circuit_to_cqtm(const CircuitDescription& c) {
  validate_circuit(c);
  const std::size_t w = c.width();
  MachineDescription m;
  m.name = "circuit_cqtm";
  m.tape_count = w + 1;
  m.initial = "s";
  m.quantum = Alphabet{"#", "0", "1"};
  m.classical = with_reserved_outcomes(Alphabet{});
  for (std::size_t j = 1; j <= w; ++j) {
    m.add_transform("Swap" + std::to_string(j), make_swap(m.quantum), {0, j});
  }
  for (const auto& g : c.gates) {
    const std::string name = "G_" + g.name;
    if (m.transforms.count(name)) continue;
    const Matrix& u = c.gate_matrix(g.name);
    std::vector<std::size_t> tapes;
    for (std::size_t j = 1; j <= g.qubits.size(); ++j) tapes.push_back(j);
    m.add_transform(name, make_unitary(3, extend_qubit_operator(u), name), tapes);
  }
  add_blank_tests(m);

  ProgramBuilder b(m, "g");
  for (const auto& g : c.gates) {
    for (std::size_t j = 0; j < g.qubits.size(); ++j) {
      b.apply_at_tape1(static_cast<long>(g.qubits[j]) + 1, "Swap" + std::to_string(j + 1));
    }
    b.apply_at(std::vector<std::optional<long>>(m.tape_count), "G_" + g.name);
    for (std::size_t j = g.qubits.size(); j-- > 0;) {
      b.apply_at_tape1(static_cast<long>(g.qubits[j]) + 1, "Swap" + std::to_string(j + 1));
    }
  }
  b.halt();
  return m;
}

}  // namespace cqtm
