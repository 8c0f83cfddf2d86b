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

#include "cqtm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cqtm/compilers.hpp"
#include "cqtm/register_ops.hpp"
#include "cqtm/text_format.hpp"

namespace cqtm {

namespace {

bool same_kind(const Verdict& a, const Verdict& b) {
  return a.kind == b.kind && a.fault == b.fault && a.output.has_value() == b.output.has_value();
}

// Fidelity of two verdicts of the same kind; 0 when the outputs differ in
// shape.
double verdict_fidelity(const Verdict& a, const Verdict& b) {
  if (!a.output) return 1.0;
  if (a.output->cells() != b.output->cells() || a.output->dim() != b.output->dim()) return 0.0;
  if (a.output->cells() == 0) return 1.0;
  return fidelity(*a.output, *b.output);
}

// render_state on one line.
std::string inline_state(const StateVector& s, const Alphabet& alphabet) {
  std::string text = render_state(s, alphabet);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  for (auto& ch : text) {
    if (ch == '\n') ch = ' ';
  }
  return text;
}

std::string describe(const DistributionEntry& e, const Alphabet* alphabet) {
  std::string s = verdict_name(e.verdict.kind);
  if (!e.verdict.fault.empty()) s += " " + e.verdict.fault;
  if (e.verdict.output && alphabet) s += " " + inline_state(*e.verdict.output, *alphabet);
  s += " p=" + format_real(e.probability);
  return s;
}

}  // namespace

std::vector<DistributionEntry> canonical_entries(const BranchDistribution& d) {
  std::vector<DistributionEntry> out = d.entries;
  if (d.residual > 0.0) {
    Verdict v;
    v.kind = VerdictKind::kNonHalt;
    out.push_back({v, d.residual});
  }
  return out;
}

DistributionComparison compare_distributions(const std::vector<DistributionEntry>& a,
                                             const std::vector<DistributionEntry>& b) {
  DistributionComparison out;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::optional<std::size_t> best;
    double best_f = -1.0;
    std::size_t candidates = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || !same_kind(a[i].verdict, b[j].verdict)) continue;
      const double f = verdict_fidelity(a[i].verdict, b[j].verdict);
      if (f < 1.0 - kMatchTolerance) continue;
      ++candidates;
      if (f > best_f) {
        best_f = f;
        best = j;
      }
    }
    if (candidates > 1) out.ambiguous = true;
    VerdictMatch m;
    m.a = i;
    m.probability_a = a[i].probability;
    if (best) {
      used[*best] = true;
      m.b = best;
      m.probability_b = b[*best].probability;
      m.fidelity = best_f;
    }
    out.matches.push_back(m);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    VerdictMatch m;
    m.b = j;
    m.probability_b = b[j].probability;
    out.matches.push_back(m);
  }
  double sum = 0.0;
  for (const auto& m : out.matches) sum += std::abs(m.probability_a - m.probability_b);
  out.tv = 0.5 * sum;
  return out;
}

double tv_distance(const BranchDistribution& a, const BranchDistribution& b) {
  return compare_distributions(canonical_entries(a), canonical_entries(b)).tv;
}

EquivalenceReport compare_runs(const MachineDescription& source, const MachineDescription& target,
                               const std::vector<StateVector>& inputs, const CompareOptions& options) {
  EquivalenceReport report;
  for (const auto& in : inputs) {
    InputReport r;
    r.input = inline_state(in, source.quantum);
    try {
      const auto moved = translate_state(in, source.quantum, target.quantum);
      if (!moved) throw Error("input uses symbols missing from the target alphabet");
      DistributionOptions so;
      so.max_steps = options.source_max_steps;
      so.prune_eps = options.prune_eps;
      so.record_traces = false;
      DistributionOptions to = so;
      to.max_steps = options.target_max_steps ? options.target_max_steps : options.source_max_steps;
      const auto ea = canonical_entries(run_distribution(source, in, so));
      auto eb = canonical_entries(run_distribution(target, *moved, to));
      for (auto& e : eb) {
        if (!e.verdict.output) continue;
        if (auto back = translate_state(*e.verdict.output, target.quantum, source.quantum)) {
          e.verdict.output = *back;
        }
      }
      const auto cmp = compare_distributions(ea, eb);
      r.tv = cmp.tv;
      r.ambiguous = cmp.ambiguous;
      for (const auto& m : cmp.matches) {
        const double gap = std::abs(m.probability_a - m.probability_b);
        r.probability_gap = std::max(r.probability_gap, gap);
        if (m.a && m.b) {
          r.min_output_fidelity = std::min(r.min_output_fidelity, m.fidelity);
          continue;
        }
        const double mass = m.a ? m.probability_a : m.probability_b;
        if (mass > options.mass_tolerance) r.verdict_match = false;
        report.unmatched_entries.push_back(r.input + (m.a ? ": source " : ": target ") +
                                           (m.a ? describe(ea[*m.a], &source.quantum)
                                                : describe(eb[*m.b], nullptr)));
      }
    } catch (const Error& e) {
      r.error = e.what();
      r.verdict_match = false;
      r.probability_gap = 1.0;
      r.tv = 1.0;
      r.min_output_fidelity = 0.0;
    }
    report.verdict_match = report.verdict_match && r.verdict_match;
    report.max_probability_gap = std::max(report.max_probability_gap, r.probability_gap);
    report.min_output_fidelity = std::min(report.min_output_fidelity, r.min_output_fidelity);
    report.max_tv = std::max(report.max_tv, r.tv);
    report.ambiguous = report.ambiguous || r.ambiguous;
    report.inputs.push_back(std::move(r));
  }
  return report;
}

AuditResult no_entanglement_audit(const MachineDescription& m, const StateVector& input,
                                  std::size_t max_steps, std::size_t branch_cap) {
  if (m.tape_count != 1) throw Error("entanglement audit needs a one-tape machine");
  for (const auto& [name, t] : m.transforms) {
    if (t.transform.arity() != 1) {
      throw Error("entanglement audit needs one-cell transforms; '" + name + "' acts on " +
                  std::to_string(t.transform.arity()) + " cells");
    }
  }
  AuditResult result;
  struct Node {
    Configuration config;
    std::vector<std::string> trace;
  };
  auto check = [&](const Node& n, std::size_t at) {
    ++result.configurations;
    const auto& q = n.config.quantum;
    if (q.cells() < 2) return true;
    for (std::size_t slot = 0; slot < q.cells(); ++slot) {
      const std::size_t cut[] = {slot};
      const auto p = entanglement_profile(q, cut);
      result.max_impurity = std::max(result.max_impurity, 1.0 - p.purity);
      if (p.schmidt_rank > 1 || p.purity < 1.0 - tol::kFidelity) {
        result.pass = false;
        result.counterexample = AuditCounterexample{at, n.trace, n.config.layout[slot].second,
                                                    p.schmidt_rank, p.purity};
        return false;
      }
    }
    return true;
  };
  std::vector<Node> live{{init_configuration(m, input), {}}};
  if (!check(live.front(), 0)) return result;
  while (!live.empty() && result.steps < max_steps) {
    ++result.steps;
    std::vector<Node> next;
    std::unordered_map<std::string, std::vector<std::size_t>> seen;
    for (const auto& n : live) {
      StepResult r;
      try {
        r = step(m, n.config);
      } catch (const MachineFault& f) {
        if (f.kind() == FaultKind::kUndefinedTransition) continue;
        throw;
      }
      for (auto& b : r.branches) {
        Node child{std::move(b.config), n.trace};
        child.trace.push_back(b.outcome);
        if (!check(child, result.steps)) return result;
        if (r.halted) continue;
        // Identical configurations have identical futures.
        auto& bucket = seen[child.config.classical_key()];
        bool duplicate = false;
        for (std::size_t idx : bucket) {
          duplicate = duplicate || next[idx].config.quantum_fidelity(child.config) >= 1.0 - 1e-12;
        }
        if (duplicate) continue;
        bucket.push_back(next.size());
        next.push_back(std::move(child));
      }
      if (next.size() > branch_cap) {
        throw MachineFault(FaultKind::kBranchCap, "more than " + std::to_string(branch_cap) + " live branches");
      }
    }
    live = std::move(next);
  }
  return result;
}

}  // namespace cqtm
