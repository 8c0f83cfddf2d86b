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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqtm/transform.hpp"

namespace cqtm {

enum class MachineKind { kCqtm, kMqtm };
enum class Move { kLeft, kRight, kStay };

char move_char(Move m);
Move parse_move(char c);

/// A transformation together with the tapes whose pointed cells it acts on,
/// in operand order. By default a j-cell transformation acts on the first j
/// heads.
struct BoundTransform {
  AdmissibleTransformation transform;
  std::vector<std::size_t> tapes;
};

struct Transition {
  std::string next;
  std::vector<Move> moves;
  /// Name in the machine's transform table, or "-" for the identity.
  std::string transform;
};

/// (K, Sigma_C, Sigma_Q, A, delta) for a k-tape machine.
struct MachineDescription {
  std::string name = "machine";
  MachineKind kind = MachineKind::kCqtm;
  std::size_t tape_count = 1;
  std::string initial = "s";
  Alphabet quantum;
  Alphabet classical;
  std::map<std::string, BoundTransform> transforms;
  std::map<std::pair<std::string, std::string>, Transition> delta;

  /// Adds or replaces a transform; empty `tapes` binds the first heads.
  void add_transform(const std::string& name, AdmissibleTransformation t,
                     std::vector<std::size_t> tapes = {});
  void add_transition(const std::string& state, const std::string& outcome, Transition t);

  /// Resolves "-" to the one-cell identity on the first tape.
  const BoundTransform& transform(const std::string& name) const;
  const Transition* find_transition(const std::string& state, const std::string& outcome) const;

  /// K: every non-halting state mentioned by delta plus the initial state.
  std::set<std::string> states() const;

 private:
  mutable std::map<std::size_t, BoundTransform> identity_cache_;
};

struct ValidationIssue {
  std::string location;
  std::string message;
};

/// Every violated invariant, with its location. Empty means valid.
std::vector<ValidationIssue> validate_machine(const MachineDescription& m);

/// Throws Error listing the issues, if any.
void require_valid(const MachineDescription& m);

/// Adds the blank test "T#" (tape 1) and "T#@j" for the other tapes when no
/// blank test is bound to that tape yet.
void add_blank_tests(MachineDescription& m);

/// Ensures "#", "!#" and "_" are classical symbols.
Alphabet with_reserved_outcomes(const Alphabet& classical);

}  // namespace cqtm
