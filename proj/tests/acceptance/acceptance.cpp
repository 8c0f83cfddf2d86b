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


// Acceptance checks, one per criterion. Each prints a single PASS/FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqtm/analysis.hpp"
#include "cqtm/compilers.hpp"
#include "cqtm/configuration.hpp"
#include "cqtm/dilation.hpp"
#include "cqtm/execution.hpp"
#include "cqtm/register_ops.hpp"
#include "cqtm/text_format.hpp"
#include "machines.hpp"
#include "oracles.hpp"

namespace cqtm {
namespace {

using testing::fixture;
using testing::load_fixture_machine;
using testing::superpose;
using testing::word;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check; the first few messages are kept.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || failures < 4) detail << " [" << what << "]";
    pass = false;
    ++failures;
  }
  int failures = 0;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

std::string join(const std::vector<std::string>& w) {
  std::string s;
  for (const auto& x : w) s += x;
  return s;
}

double entry_probability(const BranchDistribution& d, VerdictKind k) {
  double p = 0.0;
  for (const auto& e : d.entries) {
    if (e.verdict.kind == k) p += e.probability;
  }
  return p;
}

nlohmann::json step_bounds() {
  return nlohmann::json::parse(read_text_file(fixture("step_bounds.json")));
}

ClassicalTM load_tm(const std::string& name) {
  return parse_tm(read_text_file(fixture("tm/" + name + ".tm")));
}

StateVector load_state(const Alphabet& a, const std::string& name) {
  return parse_state(read_text_file(fixture("states/" + name + ".qst")), a);
}

// ---- 1

void palindrome_acceptance(Outcome& out) {
  const auto m = load_fixture_machine("palindrome");
  double slowest = 0.0;
  auto dist = [&](const StateVector& in) {
    const auto t0 = Clock::now();
    auto d = run_distribution(m, in);
    slowest = std::max(slowest, seconds_since(t0));
    return d;
  };
  const auto eps = dist(load_state(m.quantum, "eps30"));
  const double acc = entry_probability(eps, VerdictKind::kAccept);
  const double rej = entry_probability(eps, VerdictKind::kReject);
  out.require(std::abs(acc - 0.7) <= 1e-9, "eps30 accept " + fmt(acc));
  out.require(std::abs(rej - 0.3) <= 1e-9, "eps30 reject " + fmt(rej));
  for (const auto* name : {"010", "pal_sup"}) {
    const double a = entry_probability(dist(load_state(m.quantum, name)), VerdictKind::kAccept);
    out.require(std::abs(a - 1.0) <= 1e-9, std::string(name) + " accept " + fmt(a));
  }
  out.require(slowest < 1.0, "slowest run " + fmt(slowest) + " s");
  out.detail << " accept(eps30)=" << fmt(acc) << " slowest=" << fmt(slowest) << "s";
}

// ---- 2

void blank_insertion(Outcome& out) {
  const auto m = load_fixture_machine("blank_insertion");
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<StateVector, StateVector>> cases{
      {word(m.quantum, "abba"), word(m.quantum, "a#bba")},
      {superpose(m.quantum, {"aa", "bb"}, {r, r}), superpose(m.quantum, {"a#a", "b#b"}, {r, r})}};
  double worst = 1.0;
  for (const auto& [in, expect] : cases) {
    const auto d = run_distribution(m, in);
    out.require(d.halted.size() == 1, "expected one branch");
    if (d.halted.size() != 1) continue;
    const auto& h = d.halted[0];
    out.require(h.steps == 3, "steps " + std::to_string(h.steps));
    out.require(h.verdict.kind == VerdictKind::kOutput, "no output");
    if (h.verdict.kind != VerdictKind::kOutput) continue;
    const double f = fidelity(*h.verdict.output, expect);
    worst = std::min(worst, f);
    out.require(f >= 1.0 - 1e-9, "fidelity " + fmt(f));
  }
  out.detail << " min fidelity=" << fmt(worst);
}

// ---- 3

void entanglement_separation(Outcome& out) {
  const auto m = load_fixture_machine("separation");
  const auto r = step(m, init_configuration(m, word(m.quantum, "0")));
  out.require(r.halted && r.branches.size() == 1, "separation machine did not halt in one branch");
  if (out.pass) {
    const auto full = r.branches[0].config.full_state();
    const auto& c = r.branches[0].config;
    // Pointed cells: tape 1 at its head, tape 2 at its head.
    std::size_t offset = 0;
    std::vector<std::size_t> pointed;
    for (std::size_t t = 0; t < c.tapes.size(); ++t) {
      pointed.push_back(offset + static_cast<std::size_t>(c.heads[t] - c.tapes[t].lo));
      offset += c.tapes[t].cells.size();
    }
    Vector target = Vector::Zero(static_cast<Eigen::Index>(m.quantum.size() * m.quantum.size()));
    const auto h = static_cast<Eigen::Index>(m.quantum.index("#"));
    const auto z = static_cast<Eigen::Index>(m.quantum.index("0"));
    const auto d = static_cast<Eigen::Index>(m.quantum.size());
    target[h * d + z] = target[z * d + h] = 1.0 / std::sqrt(2.0);
    const auto f = factor_out(full, pointed);
    const double fid = fidelity(f.subset_state, StateVector(m.quantum.size(), 2, target));
    const std::vector<std::size_t> first{pointed[0]};
    const auto profile = entanglement_profile(full, first);
    out.require(f.purity >= 1.0 - 1e-9, "pointed pair is not pure");
    out.require(fid >= 1.0 - 1e-9, "pointed fidelity " + fmt(fid));
    out.require(profile.schmidt_rank == 2, "Schmidt rank " + std::to_string(profile.schmidt_rank));
    out.detail << " pointed fidelity=" << fmt(fid) << " rank=" << profile.schmidt_rank;
  }
  std::mt19937_64 rng(20260517);
  const std::vector<std::string> inputs{"", "0", "1", "10", "011"};
  double worst = 0.0;
  std::size_t audits = 0;
  for (int i = 0; i < 20; ++i) {
    const auto rm = testing::random_one_tape_machine(rng);
    for (const auto& w : inputs) {
      const auto a = no_entanglement_audit(rm, word(rm.quantum, w), 50);
      ++audits;
      worst = std::max(worst, a.max_impurity);
      out.require(a.pass && a.max_impurity <= 1e-9, "audit failed on machine " + std::to_string(i) + " input '" + w + "'");
    }
  }
  out.detail << " audits=" << audits << " max impurity=" << fmt(worst);
}

// ---- 4

void tm_to_cqtm(Outcome& out) {
  const auto t0 = Clock::now();
  std::size_t words = 0;
  for (const auto* name : {"increment", "parity"}) {
    const auto tm = load_tm(name);
    const auto m = compile_tm_to_cqtm(tm);
    const std::vector<std::string> letters(tm.alphabet.begin() + 1, tm.alphabet.end());
    for (const auto& w : testing::all_words(letters, 6)) {
      ++words;
      const std::string label = std::string(name) + " '" + join(w) + "'";
      const auto expect = testing::run_tm(tm, w);
      const auto d = run_distribution(m, word(m.quantum, join(w)));
      out.require(d.halted.size() == 1 && d.residual == 0.0, label + " not deterministic");
      if (d.halted.size() != 1) continue;
      const auto& h = d.halted[0];
      out.require(h.steps == 2 * expect.steps + 1, label + " steps " + std::to_string(h.steps));
      if (expect.state == "yes") {
        out.require(h.verdict.kind == VerdictKind::kAccept, label + " not accepted");
      } else if (expect.state == "no") {
        out.require(h.verdict.kind == VerdictKind::kReject, label + " not rejected");
      } else {
        const bool ok = h.verdict.kind == VerdictKind::kOutput &&
                        fidelity(*h.verdict.output, word(m.quantum, join(expect.tape))) >= 1.0 - 1e-12;
        out.require(ok, label + " wrong output");
      }
    }
  }
  const double secs = seconds_since(t0);
  out.require(secs < 10.0, "runtime " + fmt(secs) + " s");
  out.detail << " inputs=" << words << " runtime=" << fmt(secs) << "s";
}

// ---- 5

void tm_to_mqtm(Outcome& out) {
  double worst_residual = 0.0;
  for (const auto* name : {"increment", "parity"}) {
    const auto tm = load_tm(name);
    const auto m = compile_tm_to_mqtm(tm);
    const std::vector<std::string> letters(tm.alphabet.begin() + 1, tm.alphabet.end());
    for (const auto& w : testing::all_words(letters, 6)) {
      const std::string label = std::string(name) + " '" + join(w) + "'";
      const auto expect = testing::run_tm(tm, w);
      DistributionOptions o;
      o.max_steps = 40 * expect.steps;
      const auto d = run_distribution(m, word(m.quantum, join(w)), o);
      const double residual = d.residual + d.pruned;
      worst_residual = std::max(worst_residual, residual);
      out.require(residual <= std::ldexp(1.0, -30), label + " residual " + fmt(residual));
      for (const auto& e : d.entries) {
        bool ok = false;
        if (expect.state == "yes") ok = e.verdict.kind == VerdictKind::kAccept;
        if (expect.state == "no") ok = e.verdict.kind == VerdictKind::kReject;
        if (expect.state == "h") {
          ok = e.verdict.kind == VerdictKind::kOutput &&
               fidelity(*e.verdict.output, word(m.quantum, join(expect.tape))) >= 1.0 - 1e-12;
        }
        out.require(ok, label + " mass on a wrong verdict");
      }
    }
  }
  // Rounds: one diagonal measurement (outcome T or F) per round.
  const auto tm = load_tm("increment");
  const auto m = compile_tm_to_mqtm(tm);
  const std::vector<std::string> in{"1", "1", "1"};
  const auto expect = testing::run_tm(tm, in);
  const std::size_t samples = 10000;
  double rounds = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    RunOptions o;
    o.seed = 0x5eed0000u + i;
    const auto r = run_sampled(m, word(m.quantum, "111"), o);
    for (const auto& t : r.trace) rounds += (t == sym::kTop || t == sym::kBottom) ? 1.0 : 0.0;
  }
  const double perms = static_cast<double>(samples * expect.rewrites);
  const double mean = rounds / perms;
  // Geometric rounds with p = 1/2: variance (1 - p) / p^2 = 2.
  const double sigma = std::sqrt(2.0 / perms);
  out.require(expect.rewrites > 0, "no permutation in the sampled run");
  out.require(std::abs(mean - 2.0) <= 3.0 * sigma, "mean rounds " + fmt(mean));
  out.detail << " max residual=" << fmt(worst_residual) << " mean rounds=" << std::to_string(mean) << " (3 sigma "
             << fmt(3.0 * sigma) << ")";
}

// ---- 6

void circuit_to_cqtm(Outcome& out) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(66);
  std::uniform_int_distribution<int> g(0, 2), q(0, 2), bit(0, 1);
  double worst = 1.0;
  for (int trial = 0; trial < 10; ++trial) {
    CircuitDescription c;
    c.qubits = 3;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> gates;
    for (int i = 0; i < 6; ++i) {
      const int kind = g(rng);
      if (kind == 2) {
        const auto a = static_cast<std::size_t>(q(rng));
        c.gates.push_back({"CZ", {a, (a + 1 + static_cast<std::size_t>(bit(rng))) % 3}});
      } else {
        c.gates.push_back({kind == 0 ? "H" : "T", {static_cast<std::size_t>(q(rng))}});
      }
      gates.push_back({c.gates.back().name, c.gates.back().qubits});
    }
    const Vector in = testing::basis_qubits({bit(rng), bit(rng), bit(rng)});
    const Vector expect = testing::lift_to_blank_alphabet(testing::simulate_circuit(3, gates, in));
    const auto m = compile_circuit_to_cqtm(c);
    const auto d = run_distribution(m, StateVector(3, 3, testing::lift_to_blank_alphabet(in)));
    out.require(d.entries.size() == 1 && d.entries[0].verdict.kind == VerdictKind::kOutput,
                "circuit " + std::to_string(trial) + " did not give one output");
    if (d.entries.size() != 1 || !d.entries[0].verdict.output) continue;
    const double f = testing::overlap(d.entries[0].verdict.output->amplitudes(), expect);
    worst = std::min(worst, f);
    out.require(f >= 1.0 - 1e-9, "circuit " + std::to_string(trial) + " fidelity " + fmt(f));
  }
  const double secs = seconds_since(t0);
  out.require(secs < 30.0, "runtime " + fmt(secs) + " s");
  out.detail << " min fidelity=" << fmt(worst) << " runtime=" << fmt(secs) << "s";
}

// ---- 7

std::vector<int> measured(const std::vector<std::string>& trace) {
  std::vector<int> o;
  for (const auto& t : trace) {
    if (t == "0" || t == "1") o.push_back(t == "1");
  }
  return o;
}

void pattern_to_cqtm(Outcome& out) {
  const double c_bound = step_bounds()["pattern_to_cqtm"]["C"].get<double>();
  std::mt19937_64 rng(77);
  double worst_ratio = 0.0;
  double worst_fid = 1.0;
  double worst_gap = 0.0;
  for (const auto* name : {"hadamard", "two_measurements"}) {
    const auto p = parse_pattern(read_text_file(fixture(std::string("patterns/") + name + ".pat")));
    const auto m = compile_pattern_to_cqtm(p);
    const double s = static_cast<double>(p.commands.size());
    for (int i = 0; i < 5; ++i) {
      const Vector phi = testing::random_state(2, rng);
      DistributionOptions o;
      o.merge = MergePolicy::kTrace;
      const auto d = run_distribution(m, StateVector(3, 1, testing::lift_to_blank_alphabet(phi)), o);
      const auto oracle = testing::run_pattern(p, phi);
      out.require(d.halted.size() == oracle.size(), std::string(name) + " branch count");
      for (const auto& h : d.halted) {
        worst_ratio = std::max(worst_ratio, static_cast<double>(h.steps) / (s * s));
        const auto outcomes = measured(h.trace);
        const auto it = std::find_if(oracle.begin(), oracle.end(),
                                     [&](const testing::PatternBranch& b) { return b.outcomes == outcomes; });
        out.require(it != oracle.end(), std::string(name) + " branch missing from the oracle");
        if (it == oracle.end() || !h.verdict.output) continue;
        const double f = testing::overlap(h.verdict.output->amplitudes(), testing::lift_to_blank_alphabet(it->output));
        worst_fid = std::min(worst_fid, f);
        worst_gap = std::max(worst_gap, std::abs(h.probability - it->probability));
      }
    }
  }
  out.require(worst_fid >= 1.0 - 1e-9, "fidelity " + fmt(worst_fid));
  out.require(worst_gap <= 1e-9, "probability gap " + fmt(worst_gap));
  out.require(worst_ratio <= c_bound, "steps/s^2 " + fmt(worst_ratio) + " > C " + fmt(c_bound));
  out.detail << " min fidelity=" << fmt(worst_fid) << " max steps/s^2=" << fmt(worst_ratio) << " C=" << fmt(c_bound);
}

// ---- 8

void cqtm_to_mqtm(Outcome& out) {
  struct Case {
    std::string machine;
    std::vector<StateVector> inputs;
  };
  std::vector<Case> cases;
  {
    const auto a = load_fixture_machine("one_permutation").quantum;
    cases.push_back({"one_permutation", {word(a, "0"), word(a, "1"), superpose(a, {"0", "1"}, {0.6, Complex(0, 0.8)})}});
    const auto b = load_fixture_machine("one_std").quantum;
    cases.push_back({"one_std", {word(b, "1"), superpose(b, {"0", "1"}, {0.6, 0.8})}});
    const auto c = load_fixture_machine("palindrome_small").quantum;
    cases.push_back({"palindrome_small", {word(c, "0"), word(c, "00")}});
  }
  double gap = 0.0;
  double fid = 1.0;
  double stage1_tv = 0.0;
  std::size_t loops = 0;
  double round_dev = 0.0;
  for (const auto& cs : cases) {
    const auto src = load_fixture_machine(cs.machine);
    const auto m = compile_cqtm_to_mqtm(src);
    CompareOptions o;
    o.target_max_steps = 400;
    const auto r = compare_runs(src, m, cs.inputs, o);
    out.require(r.verdict_match, cs.machine + " verdict mismatch");
    gap = std::max(gap, r.max_probability_gap);
    fid = std::min(fid, r.min_output_fidelity);
    for (const auto& in : cs.inputs) {
      const auto moved = translate_state(in, src.quantum, m.quantum);
      if (!moved) continue;
      for (const auto& [state, ps] : testing::retry_round_probabilities(m, *moved, 40)) {
        for (double p : ps) {
          ++loops;
          round_dev = std::max(round_dev, std::abs(p - 0.5));
        }
      }
    }
    MqtmOptions s1;
    s1.stage1_only = true;
    const auto r1 = compare_runs(src, compile_cqtm_to_mqtm(src, s1), cs.inputs);
    out.require(r1.verdict_match, cs.machine + " stage-1 verdict mismatch");
    stage1_tv = std::max(stage1_tv, r1.max_tv);
  }
  out.require(gap <= 1e-6, "probability gap " + fmt(gap));
  out.require(fid >= 1.0 - 1e-9, "output fidelity " + fmt(fid));
  out.require(loops > 0, "no retry rounds found");
  out.require(round_dev <= 1e-9, "round success deviates by " + fmt(round_dev));
  out.require(stage1_tv <= 1e-9, "stage-1 TV " + fmt(stage1_tv));
  out.detail << " gap=" << fmt(gap) << " fidelity=" << fmt(fid) << " rounds checked=" << loops
             << " stage-1 TV=" << fmt(stage1_tv);
}

// ---- 9

void hadamard_mqtm(Outcome& out) {
  const auto m = load_fixture_machine("hadamard_mqtm");
  std::mt19937_64 rng(99);
  double worst_fid = 1.0;
  double worst_residual = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Vector phi = testing::random_state(2, rng);
    const StateVector in(3, 1, testing::lift_to_blank_alphabet(phi));
    const StateVector expect(3, 1, testing::lift_to_blank_alphabet(testing::gate("H") * phi));
    DistributionOptions o;
    o.max_steps = 60;
    const auto d = run_distribution(m, in, o);
    for (const auto& h : d.halted) {
      const bool ok = h.verdict.kind == VerdictKind::kOutput;
      out.require(ok, "halted branch without output");
      if (ok) worst_fid = std::min(worst_fid, fidelity(*h.verdict.output, expect));
    }
    worst_residual = std::max(worst_residual, d.residual + d.pruned);
    RunOptions ro;
    ro.seed = 900 + static_cast<std::uint64_t>(i);
    const auto stats = run_statistics(m, in, 200, ro);
    out.require(stats.las_vegas_empirical, "Las Vegas flag false");
  }
  out.require(worst_fid >= 1.0 - 1e-9, "fidelity " + fmt(worst_fid));
  out.require(worst_residual <= std::ldexp(1.0, -15), "residual " + fmt(worst_residual));
  out.detail << " min fidelity=" << fmt(worst_fid) << " residual=2^" << fmt(std::log2(worst_residual));
}

// ---- 10

std::size_t longest_run(const BranchDistribution& d) {
  std::size_t s = 0;
  for (const auto& h : d.halted) s = std::max(s, h.steps);
  return s;
}

void ktape_to_2tape(Outcome& out) {
  const double c_bound = step_bounds()["ktape_to_2tape"]["C"].get<double>();
  const auto src = load_fixture_machine("reverse3");
  const auto dec = parse_decompositions(read_text_file(fixture("decompositions/reverse3.dec")), src);
  const auto m = compile_ktape_to_2tape(src, dec);
  std::vector<StateVector> inputs;
  for (const auto* w : {"ab", "ba", "aa", "bb"}) inputs.push_back(word(src.quantum, w));
  inputs.push_back(superpose(src.quantum, {"ab", "ba"}, {std::sqrt(0.3), std::sqrt(0.7)}));
  CompareOptions o;
  o.target_max_steps = 5000;
  const auto r = compare_runs(src, m, inputs, o);
  out.require(r.verdict_match, "verdict mismatch");
  out.require(r.max_probability_gap <= 1e-6, "gap " + fmt(r.max_probability_gap));
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i + 1 < inputs.size(); ++i) {
    const double f = static_cast<double>(longest_run(run_distribution(src, inputs[i])));
    DistributionOptions t;
    t.max_steps = 5000;
    const auto moved = translate_state(inputs[i], src.quantum, m.quantum);
    if (!moved) continue;
    const double steps = static_cast<double>(longest_run(run_distribution(m, *moved, t)));
    worst_ratio = std::max(worst_ratio, steps / (f * f));
  }
  out.require(worst_ratio <= c_bound, "steps/f^2 " + fmt(worst_ratio) + " > C " + fmt(c_bound));
  out.detail << " gap=" << fmt(r.max_probability_gap) << " max steps/f^2=" << fmt(worst_ratio) << " C=" << fmt(c_bound);
}

// ---- 11

double max_dev(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<AdmissibleTransformation> primitives(const Alphabet& q, std::mt19937_64& rng) {
  const std::size_t d = q.size();
  std::vector<AdmissibleTransformation> out{
      make_std(q), make_blank_test(q, "#"), make_permutation(q, q[0], q[d - 1]),
      make_swap(q), make_identity(d, 1), make_unitary(d, testing::random_unitary(d, rng))};
  if (d >= 3) out.push_back(make_diagonal(q, q[1], q[2]));
  return out;
}

Alphabet outcome_register(const AdmissibleTransformation& t) {
  std::vector<std::string> syms{"#"};
  for (const auto& o : t.outcomes()) {
    if (std::find(syms.begin(), syms.end(), o) == syms.end()) syms.push_back(o);
  }
  return Alphabet(syms);
}

double dilation_tv(const AdmissibleTransformation& t, const Alphabet& reg, std::mt19937_64& rng) {
  const std::size_t d = t.dim();
  const std::size_t r = reg.size();
  const Matrix v = dilate_admissible(t, reg);
  if (!is_unitary(v)) return 1.0;
  const StateVector psi(d, 1, testing::random_state(d, rng));
  Vector in = Vector::Zero(static_cast<Eigen::Index>(d * r));
  const auto blank = static_cast<Eigen::Index>(reg.index("#"));
  for (std::size_t s = 0; s < d; ++s) in[static_cast<Eigen::Index>(s * r) + blank] = psi[s];
  const Vector image = v * in;
  double tv = 0.0;
  for (const auto& b : apply_branching(psi, std::vector<std::size_t>{0}, t, 0.0)) {
    const auto k = static_cast<Eigen::Index>(outcome_register_index(reg, 1, b.outcome));
    double p = 0.0;
    for (std::size_t s = 0; s < d; ++s) p += std::norm(image[static_cast<Eigen::Index>(s * r) + k]);
    tv += std::abs(p - b.probability) / 2.0;
  }
  return tv;
}

void core_properties(Outcome& out) {
  std::mt19937_64 rng(1111);
  const std::vector<Alphabet> alphabets{Alphabet{"#", "0"}, Alphabet{"#", "0", "1"}, Alphabet{"#", "a", "b", "c"}};
  std::size_t checked = 0;
  double worst_dev = 0.0;
  for (const auto& q : alphabets) {
    const auto pool = primitives(q, rng);
    for (const auto& t : pool) {
      const auto c = check_completeness(t);
      worst_dev = std::max(worst_dev, c.max_deviation);
      out.require(c.ok && c.max_deviation <= 1e-9, "primitive " + t.name() + " incomplete");
      ++checked;
    }
    std::vector<AdmissibleTransformation> one_cell;
    for (const auto& t : pool) {
      if (t.arity() == 1) one_cell.push_back(t);
    }
    const auto swap = make_swap(q);
    std::uniform_int_distribution<std::size_t> pick(0, one_cell.size() - 1);
    for (int i = 0; i < 20; ++i) {
      const auto& a = one_cell[pick(rng)];
      const auto& b = one_cell[pick(rng)];
      const auto& c = one_cell[pick(rng)];
      const auto sp = check_completeness(compose_sequential(compose_spatial(a, b), swap));
      const auto sq = check_completeness(compose_sequential(compose_sequential(a, b), c));
      worst_dev = std::max({worst_dev, sp.max_deviation, sq.max_deviation});
      out.require(sp.ok && sq.ok, "composition of " + a.name() + ", " + b.name() + " incomplete");
      checked += 2;
    }
    // Perturbed Kraus sets.
    for (const auto& t : pool) {
      auto br = t.branches();
      br[0].op *= 1.0 + 1e-6;
      const AdmissibleTransformation bad("bad", t.dim(), t.arity_in(), t.arity_out(), br);
      out.require(!check_completeness(bad).ok, "perturbed " + t.name() + " passed");
    }
  }
  // Dilation of one-cell transforms, including every fixture machine's.
  double worst_tv = 0.0;
  std::size_t dilated = 0;
  auto dilate_check = [&](const AdmissibleTransformation& t, const Alphabet& reg) {
    if (t.arity() != 1 || t.dim() * reg.size() > 16) return;
    const double tv = dilation_tv(t, reg, rng);
    worst_tv = std::max(worst_tv, tv);
    out.require(tv <= 1e-9, "dilation of " + t.name() + " TV " + fmt(tv));
    ++dilated;
  };
  for (const auto& q : alphabets) {
    for (const auto& t : primitives(q, rng)) dilate_check(t, outcome_register(t));
  }
  for (const auto* name : {"palindrome", "palindrome_small", "one_permutation", "one_std", "identity"}) {
    const auto m = load_fixture_machine(name);
    for (const auto& [tn, bt] : m.transforms) dilate_check(bt.transform, m.classical);
  }
  // Reflections.
  double worst_refl = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto rm = reflection_measurement(testing::random_unitary(3, rng));
    const Matrix& r = rm.reflection;
    worst_refl = std::max({worst_refl, max_dev(r * r, Matrix::Identity(r.rows(), r.cols())), max_dev(r, r.adjoint())});
  }
  out.require(worst_refl <= 1e-9, "reflection deviation " + fmt(worst_refl));
  // Seeded runs.
  const auto pal = load_fixture_machine("palindrome");
  const auto eps = load_state(pal.quantum, "eps30");
  const auto hm = load_fixture_machine("hadamard_mqtm");
  const StateVector plus(3, 1, testing::lift_to_blank_alphabet(testing::random_state(2, rng)));
  for (std::uint64_t seed : {1u, 2u, 42u}) {
    RunOptions o;
    o.seed = seed;
    const auto a = run_sampled(hm, plus, o);
    const auto b = run_sampled(hm, plus, o);
    const bool same = a.trace == b.trace && a.steps == b.steps && a.verdict.output && b.verdict.output &&
                      a.verdict.output->amplitudes() == b.verdict.output->amplitudes();
    out.require(same, "seed " + std::to_string(seed) + " not reproducible");
  }
  // Frequencies against the exact distribution.
  RunOptions so;
  so.seed = 2718;
  const std::size_t n = 10000;
  const auto stats = run_statistics(pal, eps, n, so);
  const double sigma = std::sqrt(0.7 * 0.3 / static_cast<double>(n));
  const double dev = std::abs(stats.acceptance_rate - 0.7);
  out.require(dev <= 3.0 * sigma, "acceptance frequency " + fmt(stats.acceptance_rate));
  out.detail << " compositions+primitives=" << checked << " max deviation=" << fmt(worst_dev)
             << " dilations=" << dilated << " max TV=" << fmt(worst_tv) << " frequency dev=" << fmt(dev)
             << " (3 sigma " << fmt(3.0 * sigma) << ")";
}

struct Criterion {
  const char* title;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"palindrome acceptance", palindrome_acceptance},
      {"blank insertion", blank_insertion},
      {"entanglement separation and audit", entanglement_separation},
      {"TM to CQTM", tm_to_cqtm},
      {"TM to MQTM", tm_to_mqtm},
      {"circuit to CQTM", circuit_to_cqtm},
      {"pattern to CQTM", pattern_to_cqtm},
      {"CQTM to MQTM", cqtm_to_mqtm},
      {"Hadamard MQTM", hadamard_mqtm},
      {"k tapes to 2", ktape_to_2tape},
      {"core properties", core_properties},
  };
  return all;
}

bool run_criterion(std::size_t n) {
  const auto& c = criteria()[n - 1];
  Outcome out;
  const auto t0 = Clock::now();
  try {
    c.run(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  std::cout << "criterion " << n << " " << (out.pass ? "PASS" : "FAIL") << ": " << c.title << " ("
            << fmt(seconds_since(t0)) << "s)" << out.detail.str() << std::endl;
  return out.pass;
}

}  // namespace
}  // namespace cqtm

int main(int argc, char** argv) {
  CLI::App app{"cqtm acceptance checks"};
  std::size_t only = 0;
  app.add_option("--criterion", only, "Run one criterion (1-11)")
      ->check(CLI::Range(std::size_t{1}, cqtm::criteria().size()));
  CLI11_PARSE(app, argc, argv);
  bool ok = true;
  for (std::size_t n = 1; n <= cqtm::criteria().size(); ++n) {
    if (only != 0 && n != only) continue;
    ok = cqtm::run_criterion(n) && ok;
  }
  return ok ? 0 : 1;
}
