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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqtm/configuration.hpp"
#include "cqtm/machine.hpp"

namespace cqtm {

struct RunOptions {
  std::size_t max_steps = 100000;
  std::uint64_t seed = 0;
  double prune_eps = tol::kPrune;
  bool record_trace = true;
  bool allow_blank_input = false;
};

struct SampledRun {
  Verdict verdict;
  std::size_t steps = 0;
  /// Classical outcome of every step.
  std::vector<std::string> trace;
  Configuration final_config;
};

/// One run, drawing each outcome with its probability.
SampledRun run_sampled(const MachineDescription& m, const StateVector& input,
                       const RunOptions& options = {});

enum class MergePolicy {
  /// Merge live branches with the same classical configuration and the same
  /// quantum state up to phase.
  kState,
  /// Keep every outcome sequence separate.
  kTrace,
};

struct DistributionOptions {
  std::size_t max_steps = 1000;
  std::size_t branch_cap = 1000000;
  double prune_eps = tol::kPrune;
  MergePolicy merge = MergePolicy::kState;
  bool record_traces = true;
  bool allow_blank_input = false;
};

struct HaltedBranch {
  Verdict verdict;
  double probability = 0.0;
  std::size_t steps = 0;
  std::vector<std::string> trace;
};

struct DistributionEntry {
  Verdict verdict;
  double probability = 0.0;
};

struct BranchDistribution {
  std::vector<HaltedBranch> halted;
  /// Halted branches grouped by verdict (outputs equal up to phase).
  std::vector<DistributionEntry> entries;
  /// Mass still running after max_steps.
  double residual = 0.0;
  /// Branches still running after max_steps; can be nonzero with zero
  /// residual once probabilities underflow.
  std::size_t unfinished = 0;
  /// Mass dropped by pruning.
  double pruned = 0.0;
  std::size_t max_live = 0;
  std::size_t steps = 0;

  double probability_of(VerdictKind kind) const;
};

/// Exhaustive branch expansion. Throws MachineFault(kBranchCap) when more
/// than `branch_cap` branches are alive at once.
BranchDistribution run_distribution(const MachineDescription& m, const StateVector& input,
                                    const DistributionOptions& options = {});

/// Verdicts grouped like BranchDistribution::entries.
std::vector<DistributionEntry> group_verdicts(const std::vector<HaltedBranch>& halted);

/// True when both verdicts have the same kind and fault, and their outputs
/// agree up to phase within `tolerance`.
bool same_verdict(const Verdict& a, const Verdict& b, double tolerance = tol::kFidelity);

struct SampleStatistics {
  std::size_t samples = 0;
  std::vector<DistributionEntry> entries;  // frequencies
  std::vector<std::size_t> counts;
  double acceptance_rate = 0.0;
  double mean_steps = 0.0;
  std::map<std::size_t, std::size_t> halting_times;
  /// Every non-fault sampled verdict is the same.
  bool las_vegas_empirical = false;
  /// Exhaustive enumeration halts every branch within max_steps.
  bool monte_carlo_certified = false;
};

/// `samples` independent runs; run i uses seed `options.seed ^ i`. The
/// Monte Carlo certificate comes from run_distribution with the same cap.
SampleStatistics run_statistics(const MachineDescription& m, const StateVector& input,
                                std::size_t samples, const RunOptions& options = {});

}  // namespace cqtm
