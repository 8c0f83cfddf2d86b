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


#include "cqtm/machine.hpp"

#include <algorithm>
#include <cmath>

namespace cqtm {

char move_char(Move m) {
  switch (m) {
    case Move::kLeft:
      return 'L';
    case Move::kRight:
      return 'R';
    case Move::kStay:
      break;
  }
  return '-';
}

Move parse_move(char c) {
  switch (c) {
    case 'L':
    case 'l':
    case '<':
      return Move::kLeft;
    case 'R':
    case 'r':
    case '>':
      return Move::kRight;
    case '-':
    case 'S':
    case 's':
    case '0':
      return Move::kStay;
    default:
      throw Error(std::string("unknown head move '") + c + "'");
  }
}

void MachineDescription::add_transform(const std::string& name, AdmissibleTransformation t,
                                       std::vector<std::size_t> tapes) {
  if (name.empty() || name == "-") throw Error("invalid transform name '" + name + "'");
  if (tapes.empty()) {
    for (std::size_t i = 0; i < t.arity(); ++i) tapes.push_back(i);
  }
  t.set_name(name);
  transforms[name] = BoundTransform{std::move(t), std::move(tapes)};
}

void MachineDescription::add_transition(const std::string& state, const std::string& outcome,
                                        Transition t) {
  if (t.moves.empty()) t.moves.assign(tape_count, Move::kStay);
  if (t.transform.empty()) t.transform = "-";
  delta[{state, outcome}] = std::move(t);
}

const BoundTransform& MachineDescription::transform(const std::string& name) const {
  if (name == "-") {
    auto it = identity_cache_.find(quantum.size());
    if (it == identity_cache_.end()) {
      auto id = make_identity(quantum.size(), 1);
      id.set_name("-");
      it = identity_cache_.emplace(quantum.size(), BoundTransform{std::move(id), {0}}).first;
    }
    return it->second;
  }
  auto it = transforms.find(name);
  if (it == transforms.end()) throw Error("unknown transform '" + name + "'");
  return it->second;
}

const Transition* MachineDescription::find_transition(const std::string& state,
                                                      const std::string& outcome) const {
  auto it = delta.find({state, outcome});
  return it == delta.end() ? nullptr : &it->second;
}

std::set<std::string> MachineDescription::states() const {
  std::set<std::string> k{initial};
  for (const auto& [key, t] : delta) {
    k.insert(key.first);
    if (!is_halting_state(t.next)) k.insert(t.next);
  }
  return k;
}

namespace {

bool is_blank_test_on(const BoundTransform& b, const Alphabet& q, std::size_t tape) {
  if (b.tapes.size() != 1 || b.tapes[0] != tape) return false;
  const auto& t = b.transform;
  if (t.arity() != 1 || t.dim() != q.size() || t.branches().size() != 2) return false;
  const auto blank = q.find(sym::kBlank);
  if (!blank) return false;
  const auto reference = make_blank_test(q, sym::kBlank);
  for (const auto& rb : reference.branches()) {
    const KrausBranch* own = t.find(rb.outcome);
    if (own == nullptr || (own->op - rb.op).cwiseAbs().maxCoeff() > tol::kCompleteness) return false;
  }
  return true;
}

std::string describe(const std::string& state, const std::string& outcome) {
  return "delta(" + state + ", " + outcome + ")";
}

}  // namespace

std::vector<ValidationIssue> validate_machine(const MachineDescription& m) {
  std::vector<ValidationIssue> issues;
  auto add = [&](std::string where, std::string what) {
    issues.push_back({std::move(where), std::move(what)});
  };
  if (m.tape_count == 0) add("machine", "tape count must be positive");
  if (!m.quantum.contains(sym::kBlank)) add("quantum alphabet", "missing the blank symbol '#'");
  for (auto r : {sym::kBlank, sym::kNonBlank, sym::kVoid}) {
    if (!m.classical.contains(r)) {
      add("classical alphabet", "missing reserved outcome '" + std::string(r) + "'");
    }
  }
  for (const auto& alpha : {&m.quantum, &m.classical}) {
    auto s = alpha->symbols();
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      add(alpha == &m.quantum ? "quantum alphabet" : "classical alphabet", "duplicate symbol");
    }
  }
  if (is_halting_state(m.initial)) add("initial state", "'" + m.initial + "' is a halting state");

  for (const auto& [name, b] : m.transforms) {
    const auto& t = b.transform;
    const std::string where = "transform '" + name + "'";
    if (!t.arity_preserving()) {
      add(where, "changes the number of cells (" + std::to_string(t.arity_in()) + " -> " +
                     std::to_string(t.arity_out()) + ")");
      continue;
    }
    if (t.dim() != m.quantum.size()) {
      add(where, "acts on " + std::to_string(t.dim()) + " symbols but the quantum alphabet has " +
                     std::to_string(m.quantum.size()));
      continue;
    }
    if (t.arity() == 0 || t.arity() > m.tape_count) {
      add(where, "arity " + std::to_string(t.arity()) + " does not fit " +
                     std::to_string(m.tape_count) + " tape(s)");
    }
    if (b.tapes.size() != t.arity()) {
      add(where, "bound to " + std::to_string(b.tapes.size()) + " tape(s) but has arity " +
                     std::to_string(t.arity()));
    }
    for (std::size_t i = 0; i < b.tapes.size(); ++i) {
      if (b.tapes[i] >= m.tape_count) {
        add(where, "bound to tape " + std::to_string(b.tapes[i] + 1) + " which does not exist");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (b.tapes[i] == b.tapes[j]) add(where, "bound twice to tape " + std::to_string(b.tapes[i] + 1));
      }
    }
    const auto report = check_completeness(t);
    if (!report.ok) {
      add(where, "violates completeness (max deviation " + std::to_string(report.max_deviation) + ")");
    }
    for (const auto& br : t.branches()) {
      if (!m.classical.contains(br.outcome)) {
        add(where, "outcome '" + br.outcome + "' of " + name + " not in the classical alphabet");
      }
    }
    if (m.kind == MachineKind::kMqtm && !is_projective(t)) {
      add(where, "is not projective, which a measurement-based machine requires");
    }
  }

  for (std::size_t tape = 0; tape < m.tape_count; ++tape) {
    bool found = false;
    for (const auto& [name, b] : m.transforms) {
      if (is_blank_test_on(b, m.quantum, tape)) {
        found = true;
        break;
      }
    }
    if (!found) add("tape " + std::to_string(tape + 1), "no blank test is available");
  }

  for (const auto& [key, t] : m.delta) {
    const std::string where = describe(key.first, key.second);
    if (is_halting_state(key.first)) add(where, "halting state has an outgoing transition");
    if (!m.classical.contains(key.second)) {
      add(where, "outcome '" + key.second + "' not in the classical alphabet");
    }
    if (t.moves.size() != m.tape_count) {
      add(where, "has " + std::to_string(t.moves.size()) + " head moves for " +
                     std::to_string(m.tape_count) + " tape(s)");
    }
    if (t.next.empty()) add(where, "empty target state");
    if (t.transform != "-" && m.transforms.find(t.transform) == m.transforms.end()) {
      add(where, "unknown transform '" + t.transform + "'");
    }
  }
  return issues;
}

void require_valid(const MachineDescription& m) {
  const auto issues = validate_machine(m);
  if (issues.empty()) return;
  std::string msg = "invalid machine '" + m.name + "':";
  for (const auto& i : issues) msg += "\n  " + i.location + ": " + i.message;
  throw Error(msg);
}

void add_blank_tests(MachineDescription& m) {
  if (!m.quantum.contains(sym::kBlank)) return;
  for (std::size_t tape = 0; tape < m.tape_count; ++tape) {
    bool found = false;
    for (const auto& [name, b] : m.transforms) found = found || is_blank_test_on(b, m.quantum, tape);
    if (found) continue;
    const std::string name = tape == 0 ? "T#" : "T#@" + std::to_string(tape + 1);
    m.add_transform(name, make_blank_test(m.quantum, sym::kBlank), {tape});
  }
  m.classical = with_reserved_outcomes(m.classical);
}

Alphabet with_reserved_outcomes(const Alphabet& classical) {
  auto s = classical.symbols();
  for (auto r : {sym::kBlank, sym::kNonBlank, sym::kVoid}) {
    if (std::find(s.begin(), s.end(), r) == s.end()) s.emplace_back(r);
  }
  return Alphabet(std::move(s));
}

}  // namespace cqtm
