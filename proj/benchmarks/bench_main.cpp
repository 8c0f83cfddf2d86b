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


#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "cqtm/compilers.hpp"
#include "cqtm/execution.hpp"
#include "cqtm/register_ops.hpp"
#include "cqtm/text_format.hpp"

namespace cqtm {
namespace {

std::string fixture(const std::string& rel) { return std::string(CQTM_FIXTURE_DIR) + "/" + rel; }

MachineDescription machine(const std::string& name) {
  return parse_machine(read_text_file(fixture("machines/" + name + ".cqtm")));
}

StateVector uniform(std::size_t d, std::size_t cells) {
  const std::size_t n = checked_pow(d, cells, amplitude_cap());
  Vector v = Vector::Constant(static_cast<Eigen::Index>(n), Complex(1.0, 0.0));
  return StateVector(d, cells, v / v.norm());
}

// Equal superposition of the blank-free words of length `cells` over {#,0,1}.
StateVector blank_free(std::size_t cells) {
  StateVector all = uniform(3, cells);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(all.size()));
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool blank = false;
    for (std::size_t c = 0; c < cells; ++c) blank = blank || all.digit(i, c) == 0;
    if (!blank) v[static_cast<Eigen::Index>(i)] = 1.0;
  }
  return StateVector(3, cells, v / v.norm());
}

void BM_StdOnRegister(benchmark::State& state) {
  const Alphabet q{"#", "0", "1"};
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto psi = uniform(3, cells);
  const auto t = make_std(q);
  const std::vector<std::size_t> target{cells / 2};
  for (auto _ : state) benchmark::DoNotOptimize(apply_branching(psi, target, t));
  state.SetComplexityN(static_cast<long>(psi.size()));
}
BENCHMARK(BM_StdOnRegister)->DenseRange(4, 12, 2)->Complexity();

void BM_SwapOnRegister(benchmark::State& state) {
  const Alphabet q{"#", "0", "1"};
  const auto cells = static_cast<std::size_t>(state.range(0));
  const auto psi = uniform(3, cells);
  const auto t = make_swap(q);
  const std::vector<std::size_t> target{0, cells - 1};
  for (auto _ : state) benchmark::DoNotOptimize(apply_branching(psi, target, t));
}
BENCHMARK(BM_SwapOnRegister)->DenseRange(4, 12, 4);

void BM_EntanglementProfile(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const auto cells = static_cast<std::size_t>(state.range(0));
  Vector v(static_cast<Eigen::Index>(checked_pow(3, cells, amplitude_cap())));
  for (auto& a : v) a = Complex(g(rng), g(rng));
  const StateVector psi(3, cells, v / v.norm());
  const std::vector<std::size_t> cut{0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_profile(psi, cut));
}
BENCHMARK(BM_EntanglementProfile)->DenseRange(4, 10, 2);

void BM_PalindromeDistribution(benchmark::State& state) {
  const auto m = machine("palindrome");
  const auto in = blank_free(static_cast<std::size_t>(state.range(0)));
  DistributionOptions o;
  o.record_traces = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_distribution(m, in, o));
}
BENCHMARK(BM_PalindromeDistribution)->DenseRange(2, 8, 2);

void BM_PalindromeSampled(benchmark::State& state) {
  const auto m = machine("palindrome");
  const auto in = blank_free(6);
  RunOptions o;
  o.record_trace = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sampled(m, in, o));
    ++o.seed;
  }
}
BENCHMARK(BM_PalindromeSampled);

void BM_HadamardMqtmDistribution(benchmark::State& state) {
  const auto m = machine("hadamard_mqtm");
  const auto in = parse_state("0.6+0i|0> + 0+0.8i|1>", m.quantum);
  DistributionOptions o;
  o.max_steps = static_cast<std::size_t>(state.range(0));
  o.record_traces = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_distribution(m, in, o));
}
BENCHMARK(BM_HadamardMqtmDistribution)->Arg(20)->Arg(40)->Arg(60);

void BM_CompileCqtmToMqtm(benchmark::State& state) {
  const auto m = machine("palindrome");
  for (auto _ : state) benchmark::DoNotOptimize(compile_cqtm_to_mqtm(m));
}
BENCHMARK(BM_CompileCqtmToMqtm);

void BM_KtapeReverse3(benchmark::State& state) {
  const auto src = machine("reverse3");
  const auto dec = parse_decompositions(read_text_file(fixture("decompositions/reverse3.dec")), src);
  const auto m = compile_ktape_to_2tape(src, dec);
  const auto in = parse_state("1+0i|ab>", m.quantum);
  DistributionOptions o;
  o.max_steps = 5000;
  o.record_traces = false;
  for (auto _ : state) benchmark::DoNotOptimize(run_distribution(m, in, o));
}
BENCHMARK(BM_KtapeReverse3);

}  // namespace
}  // namespace cqtm

BENCHMARK_MAIN();
