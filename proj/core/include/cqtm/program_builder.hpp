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
#include <optional>
#include <string>
#include <vector>

#include "cqtm/machine.hpp"

namespace cqtm {

/// Emits straight-line transition sequences into a machine while tracking
/// head positions at compile time. A builder sits at a cursor (state, last
/// outcome); every emitted step defines delta at the cursor and advances it.
class ProgramBuilder {
 public:
  /// Starts at (m.initial, "#") with every head at cell 0.
  ProgramBuilder(MachineDescription& m, std::string prefix);

  const std::vector<long>& heads() const { return heads_; }
  const std::string& state() const { return state_; }
  const std::string& outcome() const { return outcome_; }

  /// One transition with the given moves and transform. `next` defaults to
  /// a fresh state name. Returns the new state.
  std::string step(const std::vector<Move>& moves, const std::string& transform,
                   const std::string& next = "");

  /// Moves heads to `targets` (nullopt leaves a tape alone), one cell per
  /// step, and applies `transform` with the last move. With no moves needed
  /// the transform gets a step of its own.
  void apply_at(const std::vector<std::optional<long>>& targets, const std::string& transform);

  /// Convenience for tape-1-only positioning.
  void apply_at_tape1(long pos, const std::string& transform);

  /// Final transition into a halting state, without moves.
  void halt(const std::string& halting_state = "h");

  /// Continues from the current state after `outcome`, naming new states
  /// under `suffix`.
  ProgramBuilder fork(const std::string& outcome, const std::string& suffix) const;

  /// Sets the outcome expected at the cursor (after a measurement whose
  /// outcome is known at compile time).
  void expect(const std::string& outcome) { outcome_ = outcome; }

  std::size_t steps() const { return steps_; }

 private:
  std::string fresh();

  MachineDescription* m_;
  std::string prefix_;
  std::size_t counter_ = 0;
  std::string state_;
  std::string outcome_;
  std::vector<long> heads_;
  std::size_t steps_ = 0;
};

}  // namespace cqtm
