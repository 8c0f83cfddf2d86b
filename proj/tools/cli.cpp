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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <ostream>

#include "cqtm/analysis.hpp"
#include "cqtm/compilers.hpp"
#include "cqtm/execution.hpp"
#include "cqtm/text_format.hpp"
#include "json_output.hpp"

namespace cqtm::cli {

namespace {

namespace fs = std::filesystem;

MachineDescription load_machine(const std::string& path) {
  try {
    return parse_machine(read_text_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

// A state file, or inline state text when no such file exists.
StateVector load_state(const std::string& arg, const Alphabet& alphabet, bool renorm) {
  const bool is_file = fs::exists(arg);
  const std::string text = is_file ? read_text_file(arg) : arg;
  try {
    return parse_state(text, alphabet, renorm);
  } catch (const ParseError& e) {
    throw Error((is_file ? arg : std::string("--input")) + ": " + e.what());
  }
}

void print_verdict(std::ostream& out, const Verdict& v, const Alphabet& alphabet) {
  out << display_name(v.kind);
  if (!v.fault.empty()) out << " " << v.fault;
  if (v.output) out << " " << render_state(*v.output, alphabet);
}

struct Common {
  std::string input;
  std::size_t max_steps = 0;
  bool json = false;
  bool renorm = false;
  bool allow_blank = false;
};

void add_input_flags(CLI::App* sub, Common& c, std::size_t default_steps) {
  c.max_steps = default_steps;
  sub->add_option("--input", c.input, "State file or inline state text")->required();
  sub->add_option("--max-steps", c.max_steps, "Step cap");
  sub->add_flag("--json", c.json, "Emit JSON");
  sub->add_flag("--renorm", c.renorm, "Rescale the input to unit norm");
  sub->add_flag("--allow-blank-input", c.allow_blank, "Accept inputs with blank cells");
}

int cmd_run(const std::string& path, const Common& c, std::uint64_t seed, std::ostream& out) {
  const auto m = load_machine(path);
  require_valid(m);
  RunOptions o;
  o.max_steps = c.max_steps;
  o.seed = seed;
  o.allow_blank_input = c.allow_blank;
  const auto run = run_sampled(m, load_state(c.input, m.quantum, c.renorm), o);
  if (c.json) {
    out << envelope("run", run_json(run, m.quantum, seed)).dump(2) << "\n";
  } else {
    print_verdict(out, run.verdict, m.quantum);
    out << "\nsteps " << run.steps << "\n";
  }
  return run.verdict.kind == VerdictKind::kFault ? kExitFault : kExitOk;
}

int cmd_dist(const std::string& path, const Common& c, double prune, std::size_t branch_cap,
             const std::string& merge, std::ostream& out) {
  const auto m = load_machine(path);
  require_valid(m);
  DistributionOptions o;
  o.max_steps = c.max_steps;
  o.prune_eps = prune;
  o.branch_cap = branch_cap;
  o.merge = merge == "trace" ? MergePolicy::kTrace : MergePolicy::kState;
  o.allow_blank_input = c.allow_blank;
  const auto d = run_distribution(m, load_state(c.input, m.quantum, c.renorm), o);
  if (c.json) {
    out << envelope("dist", distribution_json(d, m.quantum)).dump(2) << "\n";
  } else {
    for (const auto& e : d.entries) {
      print_verdict(out, e.verdict, m.quantum);
      out << " " << format_real(e.probability) << "\n";
    }
    if (d.residual > 0.0) out << "NonHalt " << format_real(d.residual) << "\n";
    out << "steps " << d.steps << "\n";
  }
  const bool fault = std::any_of(d.entries.begin(), d.entries.end(),
                                 [](const auto& e) { return e.verdict.kind == VerdictKind::kFault; });
  return fault ? kExitFault : kExitOk;
}

int cmd_stats(const std::string& path, const Common& c, std::size_t samples, std::uint64_t seed,
              std::ostream& out) {
  const auto m = load_machine(path);
  require_valid(m);
  RunOptions o;
  o.max_steps = c.max_steps;
  o.seed = seed;
  o.record_trace = false;
  o.allow_blank_input = c.allow_blank;
  const auto s = run_statistics(m, load_state(c.input, m.quantum, c.renorm), samples, o);
  if (c.json) {
    out << envelope("stats", statistics_json(s, m.quantum)).dump(2) << "\n";
    return kExitOk;
  }
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    print_verdict(out, s.entries[i].verdict, m.quantum);
    out << " " << s.counts[i] << "/" << s.samples << "\n";
  }
  out << "acceptance_rate " << format_real(s.acceptance_rate) << "\n"
      << "mean_steps " << format_real(s.mean_steps) << "\n"
      << "las_vegas_empirical " << (s.las_vegas_empirical ? "true" : "false") << "\n"
      << "monte_carlo_certified " << (s.monte_carlo_certified ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_compile(const std::string& pass, const std::string& src, const std::string& dst,
                const std::string& decomp, bool stage1, std::ostream& out) {
  MachineDescription m;
  try {
    if (pass == "tm2cqtm" || pass == "tm2mqtm") {
      const auto tm = parse_tm(read_text_file(src));
      m = pass == "tm2cqtm" ? compile_tm_to_cqtm(tm) : compile_tm_to_mqtm(tm);
    } else if (pass == "circ2cqtm") {
      m = compile_circuit_to_cqtm(parse_circuit(read_text_file(src)));
    } else if (pass == "pat2cqtm") {
      m = compile_pattern_to_cqtm(parse_pattern(read_text_file(src)));
    } else {
      const auto source = parse_machine(read_text_file(src));
      if (pass == "k2two") {
        Decompositions d;
        if (!decomp.empty()) d = parse_decompositions(read_text_file(decomp), source);
        m = compile_ktape_to_2tape(source, d);
      } else {
        MqtmOptions o;
        o.stage1_only = stage1;
        m = compile_cqtm_to_mqtm(source, o);
      }
    }
  } catch (const ParseError& e) {
    throw Error(src + ": " + e.what());
  }
  write_text_file(dst, render_machine(m));
  out << "compiled " << pass << ": " << m.states().size() << " states, " << m.transforms.size()
      << " transforms, " << m.tape_count << " tapes -> " << dst << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& path, std::ostream& out) {
  const auto m = load_machine(path);
  bool projective = true;
  for (const auto& [name, t] : m.transforms) {
    const auto rep = check_completeness(t.transform);
    out << name << ": " << (rep.ok ? "complete" : "INCOMPLETE") << " (max deviation "
        << format_real(rep.max_deviation) << ")\n";
    projective = projective && is_projective(t.transform);
  }
  const auto issues = validate_machine(m);
  for (const auto& i : issues) out << "error: " << i.location << ": " << i.message << "\n";
  if (!issues.empty()) return kExitFault;
  out << "valid\n";
  if (projective) out << "all transforms projective\n";
  return kExitOk;
}

std::vector<std::string> collect_inputs(const std::string& dir, const std::vector<std::string>& inline_inputs) {
  std::vector<std::string> out;
  if (!dir.empty()) {
    if (!fs::is_directory(dir)) throw Error(dir + ": not a directory");
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".qst") out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
  }
  out.insert(out.end(), inline_inputs.begin(), inline_inputs.end());
  if (out.empty()) throw Error("compare: no inputs (use --inputs <dir> or --input)");
  return out;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& dir,
                const std::vector<std::string>& inline_inputs, const CompareOptions& o, bool json,
                bool renorm, std::ostream& out) {
  const auto ma = load_machine(a);
  const auto mb = load_machine(b);
  require_valid(ma);
  require_valid(mb);
  const auto names = collect_inputs(dir, inline_inputs);
  std::vector<StateVector> inputs;
  for (const auto& s : names) inputs.push_back(load_state(s, ma.quantum, renorm));
  const auto r = compare_runs(ma, mb, inputs, o);
  const bool ok = r.verdict_match && r.max_probability_gap <= kMatchTolerance &&
                  r.min_output_fidelity >= 1.0 - tol::kFidelity;
  if (json) {
    out << envelope("compare", report_json(r)).dump(2) << "\n";
  } else {
    for (std::size_t k = 0; k < r.inputs.size(); ++k) {
      const auto& i = r.inputs[k];
      out << names[k] << ": " << (i.verdict_match ? "match" : "MISMATCH") << " tv " << format_real(i.tv)
          << " gap " << format_real(i.probability_gap) << " fidelity " << format_real(i.min_output_fidelity);
      if (!i.error.empty()) out << " error: " << i.error;
      out << "\n";
    }
    for (const auto& u : r.unmatched_entries) out << "unmatched " << u << "\n";
    out << (ok ? "equivalent" : "NOT equivalent") << "\n";
  }
  return ok ? kExitOk : kExitFault;
}

int cmd_audit(const std::string& path, const Common& c, std::ostream& out) {
  const auto m = load_machine(path);
  require_valid(m);
  const auto a = no_entanglement_audit(m, load_state(c.input, m.quantum, c.renorm), c.max_steps);
  if (c.json) {
    out << envelope("audit-entanglement", audit_json(a)).dump(2) << "\n";
  } else if (a.pass) {
    out << "pass: " << a.configurations << " configurations over " << a.steps << " steps\n";
  } else {
    const auto& x = *a.counterexample;
    out << "entangled at step " << x.step << ": cell " << x.cell << " has Schmidt rank " << x.schmidt_rank
        << ", purity " << format_real(x.purity) << "\n";
  }
  return a.pass ? kExitOk : kExitFault;
}

int cmd_info(const std::string& path, std::ostream& out) {
  const auto m = load_machine(path);
  auto join = [](const Alphabet& a) {
    std::string s;
    for (const auto& x : a.symbols()) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  out << "name " << m.name << "\n"
      << "kind " << (m.kind == MachineKind::kCqtm ? "cqtm" : "mqtm") << "\n"
      << "tapes " << m.tape_count << "\n"
      << "initial " << m.initial << "\n"
      << "states " << m.states().size() << "\n"
      << "qalphabet " << join(m.quantum) << "\n"
      << "calphabet " << join(m.classical) << "\n"
      << "transitions " << m.delta.size() << "\n";
  for (const auto& [name, t] : m.transforms) {
    out << "transform " << name << " cells=" << t.transform.arity() << " outcomes=";
    const auto outs = t.transform.outcomes();
    for (std::size_t i = 0; i < outs.size(); ++i) out << (i ? "," : "") << outs[i];
    if (!t.tapes.empty()) {
      out << " tapes=";
      for (std::size_t i = 0; i < t.tapes.size(); ++i) out << (i ? "," : "") << t.tapes[i] + 1;
    }
    out << "\n";
  }
  return kExitOk;
}

}  // namespace

int execute_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classically-controlled quantum Turing machines", "cqtm"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string machine, machine2, pass, src, dst, decomp, dir, merge = "state";
  std::vector<std::string> inline_inputs;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t branch_cap = 1000000;
  std::size_t target_steps = 0;
  double prune = tol::kPrune;
  bool stage1 = false;
  bool json = false;
  bool renorm = false;
  Common run_c, dist_c, stats_c, audit_c;

  auto* run = app.add_subcommand("run", "Sample one run");
  run->add_option("machine", machine)->required();
  add_input_flags(run, run_c, 100000);
  run->add_option("--seed", seed, "RNG seed");
  run->callback([&] { action = [&] { return cmd_run(machine, run_c, seed, out); }; });

  auto* dist = app.add_subcommand("dist", "Exact outcome distribution");
  dist->add_option("machine", machine)->required();
  add_input_flags(dist, dist_c, 1000);
  dist->add_option("--prune", prune, "Drop branches below this probability");
  dist->add_option("--branch-cap", branch_cap, "Live branch limit");
  bool dist_text = false;
  dist->add_flag("--text", dist_text, "Plain-text table instead of JSON");
  dist->add_option("--merge", merge, "Branch merging")->check(CLI::IsMember({"state", "trace"}));
  dist->callback([&] { action = [&] {
      dist_c.json = !dist_text;
      return cmd_dist(machine, dist_c, prune, branch_cap, merge, out);
    };
  });

  auto* stats = app.add_subcommand("stats", "Sampled statistics");
  stats->add_option("machine", machine)->required();
  add_input_flags(stats, stats_c, 100000);
  stats->add_option("--samples", samples, "Number of runs");
  stats->add_option("--seed", seed, "Base seed");
  stats->callback([&] { action = [&] { return cmd_stats(machine, stats_c, samples, seed, out); }; });

  auto* compile = app.add_subcommand("compile", "Compile to a machine file");
  compile->add_option("--pass", pass, "Compilation pass")
      ->required()
      ->check(CLI::IsMember({"tm2cqtm", "tm2mqtm", "k2two", "circ2cqtm", "pat2cqtm", "cqtm2mqtm"}));
  compile->add_option("source", src)->required();
  compile->add_option("-o,--output", dst, "Output machine file")->required();
  compile->add_option("--decomp", decomp, "Decompositions for k2two");
  compile->add_flag("--stage1", stage1, "cqtm2mqtm: dilation stage only");
  compile->callback([&] { action = [&] { return cmd_compile(pass, src, dst, decomp, stage1, out); }; });

  auto* verify = app.add_subcommand("verify", "Validate a machine and report completeness");
  verify->add_option("machine", machine)->required();
  verify->callback([&] { action = [&] { return cmd_verify(machine, out); }; });

  CompareOptions copt;
  auto* compare = app.add_subcommand("compare", "Compare two machines on inputs");
  compare->add_option("source", machine)->required();
  compare->add_option("target", machine2)->required();
  compare->add_option("--inputs", dir, "Directory of .qst inputs");
  compare->add_option("--input", inline_inputs, "Extra input (file or inline)");
  compare->add_option("--max-steps", copt.source_max_steps, "Source step cap");
  compare->add_option("--target-max-steps", target_steps, "Target step cap (default: same)");
  compare->add_flag("--json", json, "Emit JSON");
  compare->add_flag("--renorm", renorm, "Rescale inputs to unit norm");
  compare->callback([&] {
    action = [&] {
      copt.target_max_steps = target_steps;
      return cmd_compare(machine, machine2, dir, inline_inputs, copt, json, renorm, out);
    };
  });

  auto* audit = app.add_subcommand("audit-entanglement", "Check that no cell gets entangled");
  audit->add_option("machine", machine)->required();
  add_input_flags(audit, audit_c, 50);
  audit->callback([&] { action = [&] { return cmd_audit(machine, audit_c, out); }; });

  auto* info = app.add_subcommand("info", "Summarize a machine");
  info->add_option("machine", machine)->required();
  info->callback([&] { action = [&] { return cmd_info(machine, out); }; });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFault;
  }
}

}  // namespace cqtm::cli
