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
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqtm/machine.hpp"
#include "cqtm/state_vector.hpp"

namespace cqtm {

enum class FaultKind {
  kUndefinedTransition,
  kEntangledOutput,
  kAmplitudeCap,
  kBranchCap,
  kInvalidInput,
};

std::string fault_name(FaultKind k);

class MachineFault : public Error {
 public:
  MachineFault(FaultKind kind, const std::string& what) : Error(what), kind_(kind) {}
  FaultKind kind() const { return kind_; }

 private:
  FaultKind kind_;
};

/// A tape cell is a known basis symbol, an unentangled pure state of its
/// own, or a slot in the quantum register.
struct Cell {
  int symbol = 0;
  int slot = -1;
  std::shared_ptr<const Vector> local;
  bool quantum() const { return slot >= 0; }
  bool superposed() const { return local != nullptr; }
};

/// Cells lo .. lo + size - 1 of one tape; everything outside is blank.
struct TapeWindow {
  long lo = 0;
  std::vector<Cell> cells;
  long hi() const { return lo + static_cast<long>(cells.size()) - 1; }
  bool contains(long pos) const { return pos >= lo && pos <= hi(); }
};

/// Snapshot (q, c, heads, tape windows, state). Cells in a product with
/// the rest of the tape are kept out of the register; full_state()
/// materializes the joint state of every window cell.
class Configuration {
 public:
  std::string internal;
  std::string last_outcome = std::string(sym::kBlank);
  std::vector<long> heads;
  std::vector<TapeWindow> tapes;
  /// slot -> (tape, position)
  std::vector<std::pair<std::size_t, long>> layout;
  StateVector quantum;
  std::size_t dim = 1;
  int blank = 0;

  Cell cell(std::size_t tape, long pos) const;
  /// Grows the window of `tape` so that it contains `pos`.
  void ensure(std::size_t tape, long pos);
  /// Moves the given cells into the register; returns their slots.
  std::vector<std::size_t> promote(const std::vector<std::pair<std::size_t, long>>& cells);
  /// Takes every register cell whose symbol has probability above
  /// 1 - `tolerance` out of the register, and every cell whose reduced
  /// state has purity above 1 - `purity_tolerance`.
  void demote_definite(double tolerance = 1e-13, double purity_tolerance = 1e-12);

  std::size_t window_cells() const;
  /// Joint state of all window cells, tape by tape, left to right.
  StateVector full_state() const;
  /// Probability that (tape, pos) holds a non-blank symbol.
  double non_blank_mass(std::size_t tape, long pos) const;
  /// Classical part (state, outcome, heads, windows, definite cells, layout).
  std::string classical_key() const;
  /// |<this|other>|^2 over the stored cells; both must share classical_key().
  double quantum_fidelity(const Configuration& other) const;
};

/// Tape 1 holds `input` on cells 1..n, head on cell 0; other tapes blank.
/// Throws MachineFault(kInvalidInput) when the input has amplitude on
/// strings containing '#' unless `allow_blank` is set.
Configuration init_configuration(const MachineDescription& m, const StateVector& input,
                                 bool allow_blank = false);

struct StepBranch {
  std::string outcome;
  Configuration config;
  double probability = 0.0;
};

struct StepResult {
  bool halted = false;
  std::vector<StepBranch> branches;
};

/// One transition. Throws MachineFault on an undefined transition or when
/// the register would exceed the amplitude cap.
StepResult step(const MachineDescription& m, const Configuration& c,
                double prune_eps = tol::kPrune);

enum class VerdictKind { kAccept, kReject, kOutput, kNonHalt, kFault };

std::string verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::kNonHalt;
  /// Tape-1 output for kOutput.
  std::optional<StateVector> output;
  std::string fault;
};

/// Verdict of a halted configuration.
Verdict extract_output(const MachineDescription& m, const Configuration& c);

/// One-tape configuration as a state over pointed symbols: symbol i at the
/// head is written as i + |Sigma_Q| in a 2|Sigma_Q|-symbol alphabet.
struct PointedConfiguration {
  std::string internal;
  std::string last_outcome;
  long lo = 0;
  StateVector state;
};

PointedConfiguration to_pointed(const Configuration& c);
Configuration from_pointed(const MachineDescription& m, const PointedConfiguration& p);

}  // namespace cqtm
