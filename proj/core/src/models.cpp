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


#include "cqtm/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace cqtm {

const ClassicalTM::Action* ClassicalTM::find(const std::string& state,
                                             const std::string& symbol) const {
  auto it = delta.find({state, symbol});
  return it == delta.end() ? nullptr : &it->second;
}

void validate_tm(const ClassicalTM& tm) {
  if (std::find(tm.alphabet.begin(), tm.alphabet.end(), sym::kBlank) == tm.alphabet.end()) {
    throw Error("tm '" + tm.name + "': alphabet lacks '#'");
  }
  if (is_halting_state(tm.initial)) throw Error("tm '" + tm.name + "': initial state halts");
  auto known = [&](const std::string& s) {
    return std::find(tm.alphabet.begin(), tm.alphabet.end(), s) != tm.alphabet.end();
  };
  for (const auto& [key, a] : tm.delta) {
    const std::string where = "tm '" + tm.name + "' delta(" + key.first + ", " + key.second + ")";
    if (is_halting_state(key.first)) throw Error(where + ": halting state has a transition");
    if (!known(key.second)) throw Error(where + ": unknown symbol '" + key.second + "'");
    if (!known(a.write)) throw Error(where + ": writes unknown symbol '" + a.write + "'");
  }
}

namespace {

std::map<std::string, Matrix> build_standard_gates() {
  using namespace std::complex_literals;
  const double r = 1.0 / std::sqrt(2.0);
  std::map<std::string, Matrix> g;
  Matrix h(2, 2);
  h << r, r, r, -r;
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Matrix y(2, 2);
  y << 0, -1i, 1i, 0;
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  Matrix s(2, 2);
  s << 1, 0, 0, 1i;
  Matrix t(2, 2);
  t << 1, 0, 0, std::exp(1i * (std::numbers::pi / 4));
  Matrix cz = Matrix::Identity(4, 4);
  cz(3, 3) = -1;
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  g["H"] = h;
  g["X"] = x;
  g["Y"] = y;
  g["Z"] = z;
  g["S"] = s;
  g["T"] = t;
  g["CZ"] = cz;
  g["CNOT"] = cnot;
  return g;
}

}  // namespace

const std::map<std::string, Matrix>& standard_gates() {
  static const std::map<std::string, Matrix> gates = build_standard_gates();
  return gates;
}

const Matrix& CircuitDescription::gate_matrix(const std::string& name) const {
  if (auto it = custom.find(name); it != custom.end()) return it->second;
  const auto& std_gates = standard_gates();
  if (auto it = std_gates.find(name); it != std_gates.end()) return it->second;
  throw Error("unknown gate '" + name + "'");
}

std::size_t CircuitDescription::width() const {
  std::size_t w = 0;
  for (const auto& g : gates) w = std::max(w, g.qubits.size());
  return w;
}

void validate_circuit(const CircuitDescription& c) {
  for (const auto& [name, m] : c.custom) {
    if (!log_dim(2, static_cast<std::size_t>(m.rows())) || m.rows() != m.cols()) {
      throw Error("gate '" + name + "' is not a qubit operator");
    }
    if (!is_unitary(m)) throw Error("gate '" + name + "' is not unitary");
  }
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    const Matrix& m = c.gate_matrix(g.name);
    const std::string where = "gate " + std::to_string(i + 1) + " (" + g.name + ")";
    if (op_side(2, g.qubits.size()) != static_cast<std::size_t>(m.rows())) {
      throw Error(where + ": expects " + std::to_string(*log_dim(2, static_cast<std::size_t>(m.rows()))) +
                  " qubit(s)");
    }
    std::set<std::size_t> seen;
    for (std::size_t q : g.qubits) {
      if (q >= c.qubits) throw Error(where + ": qubit " + std::to_string(q) + " out of range");
      if (!seen.insert(q).second) throw Error(where + ": repeated qubit " + std::to_string(q));
    }
  }
}

void validate_pattern(const PatternDescription& p) {
  std::set<std::size_t> v(p.vertices.begin(), p.vertices.end());
  if (v.size() != p.vertices.size()) throw Error("pattern: repeated vertex");
  auto in_v = [&](std::size_t q, const char* what) {
    if (!v.count(q)) throw Error(std::string("pattern: ") + what + " qubit " + std::to_string(q) + " not in V");
  };
  for (auto q : p.inputs) in_v(q, "input");
  for (auto q : p.outputs) in_v(q, "output");
  if (std::set<std::size_t>(p.inputs.begin(), p.inputs.end()).size() != p.inputs.size()) {
    throw Error("pattern: repeated input");
  }
  if (std::set<std::size_t>(p.outputs.begin(), p.outputs.end()).size() != p.outputs.size()) {
    throw Error("pattern: repeated output");
  }
  std::set<std::size_t> measured;
  for (std::size_t i = 0; i < p.commands.size(); ++i) {
    const auto& c = p.commands[i];
    const std::string where = "pattern command " + std::to_string(i + 1);
    in_v(c.a, "command");
    if (measured.count(c.a)) throw Error(where + ": qubit " + std::to_string(c.a) + " already measured");
    switch (c.op) {
      case PatternOp::kEntangle:
        in_v(c.b, "command");
        if (c.a == c.b) throw Error(where + ": E needs two distinct qubits");
        if (measured.count(c.b)) throw Error(where + ": qubit " + std::to_string(c.b) + " already measured");
        break;
      case PatternOp::kMeasure:
        if (std::find(p.outputs.begin(), p.outputs.end(), c.a) != p.outputs.end()) {
          throw Error(where + ": output qubit " + std::to_string(c.a) + " is measured");
        }
        measured.insert(c.a);
        break;
      case PatternOp::kCorrectX:
      case PatternOp::kCorrectZ:
        for (auto s : c.signals) {
          if (!measured.count(s)) {
            throw Error(where + ": signal s" + std::to_string(s) + " refers to an unmeasured qubit");
          }
        }
        break;
    }
  }
  for (auto q : p.vertices) {
    const bool out = std::find(p.outputs.begin(), p.outputs.end(), q) != p.outputs.end();
    if (!out && !measured.count(q)) {
      throw Error("pattern: non-output qubit " + std::to_string(q) + " is never measured");
    }
  }
}

}  // namespace cqtm
