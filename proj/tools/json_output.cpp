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

#include "json_output.hpp"

#include "cqtm/text_format.hpp"

#ifndef CQTM_VERSION
#define CQTM_VERSION "0.0.0"
#endif

namespace cqtm::cli {

std::string display_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::kAccept:
      return "Accept";
    case VerdictKind::kReject:
      return "Reject";
    case VerdictKind::kOutput:
      return "Output";
    case VerdictKind::kNonHalt:
      return "NonHalt";
    case VerdictKind::kFault:
      return "Fault";
  }
  return "?";
}

Json state_json(const StateVector& s, const Alphabet& alphabet) {
  Json amps = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) amps.push_back({s[i].real(), s[i].imag()});
  return {{"cells", s.cells()}, {"text", render_state(s, alphabet)}, {"amplitudes", amps}};
}

Json verdict_json(const Verdict& v, const Alphabet& alphabet) {
  Json j{{"verdict", display_name(v.kind)}};
  if (!v.fault.empty()) j["fault"] = v.fault;
  if (v.output) j["output"] = state_json(*v.output, alphabet);
  return j;
}

Json run_json(const SampledRun& run, const Alphabet& alphabet, std::uint64_t seed) {
  Json j = verdict_json(run.verdict, alphabet);
  j["seed"] = seed;
  j["steps"] = run.steps;
  j["trace"] = run.trace;
  return j;
}

Json distribution_json(const BranchDistribution& d, const Alphabet& alphabet) {
  Json summary = Json::object();
  for (const auto& e : d.entries) {
    const std::string key = display_name(e.verdict.kind);
    summary[key] = summary.value(key, 0.0) + e.probability;
  }
  if (d.residual > 0.0) summary["NonHalt"] = d.residual;
  Json entries = Json::array();
  for (const auto& e : d.entries) {
    Json j = verdict_json(e.verdict, alphabet);
    j["probability"] = e.probability;
    entries.push_back(std::move(j));
  }
  Json halted = Json::array();
  for (const auto& h : d.halted) {
    Json j = verdict_json(h.verdict, alphabet);
    j["probability"] = h.probability;
    j["steps"] = h.steps;
    j["trace"] = h.trace;
    halted.push_back(std::move(j));
  }
  return {{"probabilities", summary}, {"entries", entries},       {"residual", d.residual},
          {"unfinished", d.unfinished}, {"pruned", d.pruned},     {"steps", d.steps},
          {"max_live", d.max_live},     {"halted", halted}};
}

Json statistics_json(const SampleStatistics& s, const Alphabet& alphabet) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    Json j = verdict_json(s.entries[i].verdict, alphabet);
    j["count"] = s.counts[i];
    j["frequency"] = s.entries[i].probability;
    entries.push_back(std::move(j));
  }
  Json hist = Json::object();
  for (const auto& [t, n] : s.halting_times) hist[std::to_string(t)] = n;
  return {{"samples", s.samples},
          {"acceptance_rate", s.acceptance_rate},
          {"mean_steps", s.mean_steps},
          {"las_vegas_empirical", s.las_vegas_empirical},
          {"monte_carlo_certified", s.monte_carlo_certified},
          {"entries", entries},
          {"halting_times", hist}};
}

Json report_json(const EquivalenceReport& r) {
  Json inputs = Json::array();
  for (const auto& i : r.inputs) {
    Json j{{"input", i.input},
           {"verdict_match", i.verdict_match},
           {"tv", i.tv},
           {"probability_gap", i.probability_gap},
           {"min_output_fidelity", i.min_output_fidelity},
           {"ambiguous", i.ambiguous}};
    if (!i.error.empty()) j["error"] = i.error;
    inputs.push_back(std::move(j));
  }
  return {{"verdict_match", r.verdict_match},
          {"max_probability_gap", r.max_probability_gap},
          {"min_output_fidelity", r.min_output_fidelity},
          {"max_tv", r.max_tv},
          {"ambiguous", r.ambiguous},
          {"unmatched_entries", r.unmatched_entries},
          {"inputs", inputs}};
}

Json audit_json(const AuditResult& a) {
  Json j{{"pass", a.pass},
         {"steps", a.steps},
         {"configurations", a.configurations},
         {"max_impurity", a.max_impurity}};
  if (a.counterexample) {
    const auto& c = *a.counterexample;
    j["counterexample"] = {{"step", c.step},
                           {"cell", c.cell},
                           {"schmidt_rank", c.schmidt_rank},
                           {"purity", c.purity},
                           {"trace", c.trace}};
  }
  return j;
}

Json envelope(const std::string& command, const Json& body) {
  Json j{{"command", command}, {"format", kFormatVersion}, {"version", CQTM_VERSION}};
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

}  // namespace cqtm::cli
