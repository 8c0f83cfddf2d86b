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

#include "cqtm/execution.hpp"
#include "cqtm/machine.hpp"

namespace cqtm {

/// Output states are matched when their fidelity reaches 1 - kMatch.
inline constexpr double kMatchTolerance = 1e-6;

struct VerdictMatch {
  /// Index into each side's entry list; nullopt for unmatched entries.
  std::optional<std::size_t> a;
  std::optional<std::size_t> b;
  double probability_a = 0.0;
  double probability_b = 0.0;
  /// Output fidelity for matched outputs, 1 otherwise.
  double fidelity = 1.0;
};

struct DistributionComparison {
  double tv = 0.0;
  std::vector<VerdictMatch> matches;
  /// Some entry had two or more candidates above the match threshold.
  bool ambiguous = false;
};

/// Halted entries plus a non-halt entry for the residual mass.
std::vector<DistributionEntry> canonical_entries(const BranchDistribution& d);

/// Greedy matching of verdicts (outputs by fidelity >= 1 - 1e-6, best
/// candidate first) and the total variation over the matching.
DistributionComparison compare_distributions(const std::vector<DistributionEntry>& a,
                                             const std::vector<DistributionEntry>& b);

/// 1/2 sum |p_a - p_b| over matched verdicts plus unmatched mass.
double tv_distance(const BranchDistribution& a, const BranchDistribution& b);

struct InputReport {
  std::string input;
  double tv = 0.0;
  double probability_gap = 0.0;
  double min_output_fidelity = 1.0;
  bool verdict_match = true;
  bool ambiguous = false;
  /// Error raised while running either side (translation, branch cap...).
  std::string error;
};

struct EquivalenceReport {
  bool verdict_match = true;
  double max_probability_gap = 0.0;
  double min_output_fidelity = 1.0;
  double max_tv = 0.0;
  bool ambiguous = false;
  std::vector<std::string> unmatched_entries;
  std::vector<InputReport> inputs;
};

struct CompareOptions {
  std::size_t source_max_steps = 1000;
  /// Zero means source_max_steps.
  std::size_t target_max_steps = 0;
  double prune_eps = tol::kPrune;
  /// Unmatched entries up to this mass do not break verdict_match.
  double mass_tolerance = kMatchTolerance;
};

/// Runs both machines on every input (given over the source alphabet and
/// translated by symbol name) and reports the worst gaps. Target outputs are
/// translated back to the source alphabet before matching.
EquivalenceReport compare_runs(const MachineDescription& source, const MachineDescription& target,
                               const std::vector<StateVector>& inputs,
                               const CompareOptions& options = {});

struct AuditCounterexample {
  std::size_t step = 0;
  std::vector<std::string> trace;
  /// Tape cell whose reduced state is mixed.
  long cell = 0;
  std::size_t schmidt_rank = 0;
  double purity = 0.0;
};

struct AuditResult {
  bool pass = true;
  std::size_t steps = 0;
  std::size_t configurations = 0;
  /// Largest 1 - purity seen.
  double max_impurity = 0.0;
  std::optional<AuditCounterexample> counterexample;
};

/// Steps every branch of a one-tape machine with one-cell transforms and
/// checks that every tape cell stays unentangled from the rest. Throws Error
/// when the machine does not meet that precondition.
AuditResult no_entanglement_audit(const MachineDescription& m, const StateVector& input,
                                  std::size_t max_steps, std::size_t branch_cap = 100000);

}  // namespace cqtm
