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


#include "cqtm/execution.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <utility>

#include "cqtm/register_ops.hpp"

namespace cqtm {

namespace {

// Longest run over the graph of distinct configurations. Returns false when
// a configuration can reach itself or some run needs more than max_steps.
bool every_branch_halts(const MachineDescription& m, const Configuration& root,
                        std::size_t max_steps, std::size_t node_cap) {
  struct Node {
    Configuration config;
    std::vector<std::size_t> children;
    std::size_t longest = 0;
    int color = 0;  // 0 new, 1 on stack, 2 done
    bool expanded = false;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::vector<std::size_t>> index;
  auto intern = [&](Configuration c) {
    auto& bucket = index[c.classical_key()];
    for (std::size_t id : bucket) {
      if (nodes[id].config.quantum_fidelity(c) >= 1.0 - 1e-12) return id;
    }
    if (nodes.size() >= node_cap) throw MachineFault(FaultKind::kBranchCap, "certificate graph too large");
    nodes.push_back({std::move(c), {}, 0, 0, false});
    bucket.push_back(nodes.size() - 1);
    return nodes.size() - 1;
  };
  std::vector<std::size_t> stack{intern(root)};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    if (!nodes[id].expanded) {
      nodes[id].expanded = true;
      nodes[id].color = 1;
      const auto r = step(m, nodes[id].config, 0.0);
      std::vector<std::size_t> children;
      for (const auto& b : r.branches) {
        if (r.halted || b.probability <= 0.0) continue;
        children.push_back(intern(b.config));
      }
      nodes[id].children = children;
      for (std::size_t c : children) {
        if (nodes[c].color == 1) return false;
        if (nodes[c].color == 0) stack.push_back(c);
      }
      continue;
    }
    stack.pop_back();
    if (nodes[id].color == 2) continue;
    std::size_t longest = 0;
    for (std::size_t c : nodes[id].children) longest = std::max(longest, nodes[c].longest);
    nodes[id].longest = longest + 1;
    nodes[id].color = 2;
    if (nodes[id].longest > max_steps) return false;
  }
  return true;
}

Verdict fault_verdict(const MachineFault& f) {
  Verdict v;
  v.kind = VerdictKind::kFault;
  v.fault = fault_name(f.kind());
  return v;
}

struct Live {
  Configuration config;
  double probability = 0.0;
  std::vector<std::string> trace;
};

}  // namespace

SampledRun run_sampled(const MachineDescription& m, const StateVector& input,
                       const RunOptions& options) {
  SampledRun run;
  std::mt19937_64 rng(options.seed);
  try {
    run.final_config = init_configuration(m, input, options.allow_blank_input);
  } catch (const MachineFault& f) {
    run.verdict = fault_verdict(f);
    return run;
  }
  std::vector<double> probs;
  while (run.steps < options.max_steps) {
    StepResult r;
    try {
      r = step(m, run.final_config, options.prune_eps);
    } catch (const MachineFault& f) {
      run.verdict = fault_verdict(f);
      return run;
    }
    ++run.steps;
    probs.clear();
    for (const auto& b : r.branches) probs.push_back(b.probability);
    auto& chosen = r.branches[sample_index(probs, rng)];
    if (options.record_trace) run.trace.push_back(chosen.outcome);
    run.final_config = std::move(chosen.config);
    if (r.halted) {
      try {
        run.verdict = extract_output(m, run.final_config);
      } catch (const MachineFault& f) {
        run.verdict = fault_verdict(f);
      }
      return run;
    }
  }
  run.verdict.kind = VerdictKind::kNonHalt;
  return run;
}

bool same_verdict(const Verdict& a, const Verdict& b, double tolerance) {
  if (a.kind != b.kind || a.fault != b.fault) return false;
  if (a.output.has_value() != b.output.has_value()) return false;
  if (!a.output) return true;
  if (a.output->cells() != b.output->cells()) return false;
  if (a.output->cells() == 0) return true;
  if (a.output->dim() != b.output->dim()) return false;
  return fidelity(*a.output, *b.output) >= 1.0 - tolerance;
}

std::vector<DistributionEntry> group_verdicts(const std::vector<HaltedBranch>& halted) {
  std::vector<DistributionEntry> entries;
  for (const auto& h : halted) {
    bool merged = false;
    for (auto& e : entries) {
      if (same_verdict(e.verdict, h.verdict)) {
        e.probability += h.probability;
        merged = true;
        break;
      }
    }
    if (!merged) entries.push_back({h.verdict, h.probability});
  }
  return entries;
}

double BranchDistribution::probability_of(VerdictKind kind) const {
  double p = 0.0;
  for (const auto& e : entries) {
    if (e.verdict.kind == kind) p += e.probability;
  }
  return p;
}

BranchDistribution run_distribution(const MachineDescription& m, const StateVector& input,
                                    const DistributionOptions& options) {
  BranchDistribution dist;
  std::vector<Live> live;
  try {
    live.push_back({init_configuration(m, input, options.allow_blank_input), 1.0, {}});
  } catch (const MachineFault& f) {
    dist.halted.push_back({fault_verdict(f), 1.0, 0, {}});
    dist.entries = group_verdicts(dist.halted);
    return dist;
  }
  dist.max_live = 1;
  while (!live.empty() && dist.steps < options.max_steps) {
    ++dist.steps;
    std::vector<Live> next;
    std::unordered_map<std::string, std::vector<std::size_t>> by_key;
    for (auto& l : live) {
      StepResult r;
      try {
        r = step(m, l.config, options.prune_eps);
      } catch (const MachineFault& f) {
        dist.halted.push_back({fault_verdict(f), l.probability, dist.steps, std::move(l.trace)});
        continue;
      }
      double kept = 0.0;
      for (auto& b : r.branches) {
        const double p = l.probability * b.probability;
        kept += b.probability;
        std::vector<std::string> trace;
        if (options.record_traces) {
          trace = l.trace;
          trace.push_back(b.outcome);
        }
        if (r.halted) {
          Verdict v;
          try {
            v = extract_output(m, b.config);
          } catch (const MachineFault& f) {
            v = fault_verdict(f);
          }
          dist.halted.push_back({std::move(v), p, dist.steps, std::move(trace)});
          continue;
        }
        if (options.merge == MergePolicy::kState) {
          auto& bucket = by_key[b.config.classical_key()];
          bool merged = false;
          for (std::size_t idx : bucket) {
            if (next[idx].config.quantum_fidelity(b.config) >= 1.0 - 1e-12) {
              next[idx].probability += p;
              merged = true;
              break;
            }
          }
          if (merged) continue;
          bucket.push_back(next.size());
        }
        next.push_back({std::move(b.config), p, std::move(trace)});
        if (next.size() > options.branch_cap) {
          throw MachineFault(FaultKind::kBranchCap,
                             "more than " + std::to_string(options.branch_cap) + " live branches");
        }
      }
      dist.pruned += l.probability * std::max(0.0, 1.0 - kept);
    }
    live = std::move(next);
    dist.max_live = std::max(dist.max_live, live.size());
  }
  for (const auto& l : live) dist.residual += l.probability;
  dist.unfinished = live.size();
  dist.entries = group_verdicts(dist.halted);
  return dist;
}

SampleStatistics run_statistics(const MachineDescription& m, const StateVector& input,
                                std::size_t samples, const RunOptions& options) {
  SampleStatistics stats;
  stats.samples = samples;
  std::vector<HaltedBranch> outcomes;
  double steps = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    RunOptions o = options;
    o.seed = options.seed ^ static_cast<std::uint64_t>(i);
    o.record_trace = false;
    const auto run = run_sampled(m, input, o);
    steps += static_cast<double>(run.steps);
    if (run.verdict.kind != VerdictKind::kNonHalt && run.verdict.kind != VerdictKind::kFault) {
      ++stats.halting_times[run.steps];
    }
    bool merged = false;
    for (std::size_t e = 0; e < stats.entries.size(); ++e) {
      if (same_verdict(stats.entries[e].verdict, run.verdict)) {
        ++stats.counts[e];
        merged = true;
        break;
      }
    }
    if (!merged) {
      stats.entries.push_back({run.verdict, 0.0});
      stats.counts.push_back(1);
    }
  }
  for (std::size_t e = 0; e < stats.entries.size(); ++e) {
    stats.entries[e].probability =
        samples == 0 ? 0.0 : static_cast<double>(stats.counts[e]) / static_cast<double>(samples);
  }
  stats.mean_steps = samples == 0 ? 0.0 : steps / static_cast<double>(samples);
  std::size_t kinds = 0;
  for (std::size_t e = 0; e < stats.entries.size(); ++e) {
    const auto k = stats.entries[e].verdict.kind;
    if (k == VerdictKind::kAccept) stats.acceptance_rate = stats.entries[e].probability;
    if (k != VerdictKind::kFault) ++kinds;
  }
  stats.las_vegas_empirical = kinds == 1;
  try {
    const auto root = init_configuration(m, input, options.allow_blank_input);
    stats.monte_carlo_certified =
        every_branch_halts(m, root, options.max_steps, DistributionOptions().branch_cap);
  } catch (const MachineFault&) {
    stats.monte_carlo_certified = false;
  }
  return stats;
}

}  // namespace cqtm
