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


#include "cqtm/program_builder.hpp"

namespace cqtm {

ProgramBuilder::ProgramBuilder(MachineDescription& m, std::string prefix)
    : m_(&m),
      prefix_(std::move(prefix)),
      state_(m.initial),
      outcome_(sym::kBlank),
      heads_(m.tape_count, 0) {}

std::string ProgramBuilder::fresh() { return prefix_ + std::to_string(counter_++); }

std::string ProgramBuilder::step(const std::vector<Move>& moves, const std::string& transform,
                                 const std::string& next) {
  if (moves.size() != m_->tape_count) throw Error("program step: wrong number of moves");
  const std::string target = next.empty() ? fresh() : next;
  if (m_->find_transition(state_, outcome_) != nullptr) {
    throw Error("program step: transition (" + state_ + ", " + outcome_ + ") already defined");
  }
  m_->add_transition(state_, outcome_, Transition{target, moves, transform});
  for (std::size_t t = 0; t < moves.size(); ++t) {
    if (moves[t] == Move::kLeft) --heads_[t];
    if (moves[t] == Move::kRight) ++heads_[t];
  }
  state_ = target;
  outcome_ = std::string(sym::kVoid);
  ++steps_;
  return target;
}

void ProgramBuilder::apply_at(const std::vector<std::optional<long>>& targets,
                              const std::string& transform) {
  if (targets.size() != m_->tape_count) throw Error("program: wrong number of head targets");
  while (true) {
    std::vector<Move> moves(m_->tape_count, Move::kStay);
    bool last = true;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!targets[t]) continue;
      const long delta = *targets[t] - heads_[t];
      if (delta > 0) moves[t] = Move::kRight;
      if (delta < 0) moves[t] = Move::kLeft;
      if (delta > 1 || delta < -1) last = false;
    }
    step(moves, last ? transform : "-");
    if (last) return;
  }
}

void ProgramBuilder::apply_at_tape1(long pos, const std::string& transform) {
  std::vector<std::optional<long>> targets(m_->tape_count);
  targets[0] = pos;
  apply_at(targets, transform);
}

void ProgramBuilder::halt(const std::string& halting_state) {
  step(std::vector<Move>(m_->tape_count, Move::kStay), "-", halting_state);
}

ProgramBuilder ProgramBuilder::fork(const std::string& outcome, const std::string& suffix) const {
  ProgramBuilder b = *this;
  b.prefix_ = prefix_ + suffix + ".";
  b.counter_ = 0;
  b.outcome_ = outcome;
  return b;
}

}  // namespace cqtm
