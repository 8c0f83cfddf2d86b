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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cqtm/dilation.hpp"
#include "cqtm/register_ops.hpp"
#include "cqtm/state_vector.hpp"
#include "cqtm/transform.hpp"
#include "oracles.hpp"

namespace cqtm {
namespace {

using namespace std::complex_literals;
using testing::overlap;

const Alphabet kBinary{"0", "1"};
const Alphabet kTernary{"#", "0", "1"};
const double kR = 1.0 / std::sqrt(2.0);

StateVector make(std::size_t d, std::size_t n, std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v[i++] = a;
  return StateVector(d, n, v);
}

double max_dev(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Tensor, BasisStates) {
  const auto s = StateVector::basis(2, {0}).tensor(StateVector::basis(2, {1}));
  EXPECT_EQ(s, StateVector::basis(2, {0, 1}));
}

TEST(Tensor, IdentityOperators) {
  EXPECT_LT(max_dev(kron(Matrix::Identity(3, 3), Matrix::Identity(3, 3)), Matrix::Identity(9, 9)), 1e-15);
}

TEST(Tensor, SuperpositionWithBlank) {
  const auto a = make(3, 1, {kR, kR, 0});
  const auto s = tensor(a, StateVector::basis(3, {0}));
  // (|##> + |0#>)/sqrt2: indices 0 and 3.
  EXPECT_NEAR(std::abs(s[0] - kR), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[3] - kR), 0.0, 1e-15);
  EXPECT_NEAR(s.amplitudes().squaredNorm(), 1.0, 1e-15);
}

TEST(Completeness, StdResolvesIdentity) {
  EXPECT_TRUE(check_completeness(make_std(kTernary)).ok);
}

TEST(Completeness, UnitaryIsAdmissible) {
  std::mt19937_64 rng(3);
  EXPECT_TRUE(check_completeness(make_unitary(3, testing::random_unitary(3, rng))).ok);
}

TEST(Completeness, ScaledKrausOperatorIsReported) {
  auto branches = make_std(kTernary).branches();
  branches[1].op *= 1.01;
  const AdmissibleTransformation bad("bad", 3, 1, 1, branches);
  const auto rep = check_completeness(bad);
  EXPECT_FALSE(rep.ok);
  // 1.01^2 - 1
  EXPECT_NEAR(rep.max_deviation, 0.0201, 1e-12);
  EXPECT_EQ(rep.worst_row, 1);
  EXPECT_EQ(rep.worst_col, 1);
}

TEST(Completeness, MixedShapesThrow) {
  EXPECT_THROW(AdmissibleTransformation("bad", 2, 1, 1,
                                        {{"a", Matrix::Identity(2, 2)}, {"b", Matrix::Identity(4, 4)}}),
               Error);
}

TEST(Primitives, PermutationMovesSymbolToBlank) {
  const auto b = apply_branching(StateVector::basis(3, {1}), std::vector<std::size_t>{0},
                                 make_permutation(kTernary, "0", "#"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].outcome, "_");
  EXPECT_NEAR(b[0].probability, 1.0, 1e-15);
  EXPECT_NEAR(fidelity(b[0].state, StateVector::basis(3, {0})), 1.0, 1e-15);
}

TEST(Primitives, DiagonalMeasurementSplitsEvenly) {
  const auto b = apply_branching(StateVector::basis(3, {1}), std::vector<std::size_t>{0},
                                 make_diagonal(kTernary, "0", "1"));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].outcome, "T");
  EXPECT_EQ(b[1].outcome, "F");
  EXPECT_NEAR(b[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(b[1].probability, 0.5, 1e-12);
  EXPECT_NEAR(fidelity(b[0].state, make(3, 1, {0, kR, kR})), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(b[1].state, make(3, 1, {0, kR, -kR})), 1.0, 1e-12);
  const auto outs = make_diagonal(kTernary, "0", "1").outcomes();
  EXPECT_EQ(outs, (std::vector<std::string>{"T", "F", "#"}));
}

TEST(Primitives, BlankTestOnBlank) {
  const auto b = apply_branching(StateVector::basis(3, {0}), std::vector<std::size_t>{0},
                                 make_blank_test(kTernary, "#"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].outcome, "#");
  EXPECT_NEAR(b[0].probability, 1.0, 1e-15);
}

TEST(Primitives, AllComplete) {
  std::mt19937_64 rng(5);
  Matrix proj_a = Matrix::Zero(3, 3), proj_b = Matrix::Zero(3, 3);
  proj_a(0, 0) = 1;
  proj_b(1, 1) = proj_b(2, 2) = 1;
  const std::vector<AdmissibleTransformation> all{
      make_std(kTernary),
      make_blank_test(kTernary, "#"),
      make_blank_test(kTernary, "1"),
      make_permutation(kTernary, "0", "1"),
      make_swap(kTernary),
      make_identity(3, 2),
      make_unitary(3, testing::random_unitary(3, rng)),
      make_observable(3, {{"a", proj_a}, {"b", proj_b}}),
      make_diagonal(kTernary, "#", "1"),
  };
  for (const auto& t : all) EXPECT_TRUE(check_completeness(t).ok) << t.name();
}

TEST(Primitives, RejectsBadInput) {
  EXPECT_THROW(make_unitary(2, (Matrix(2, 2) << 1, 1, 0, 1).finished()), Error);
  Matrix half = Matrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(make_observable(2, {{"a", half}, {"b", half}}), Error);
  EXPECT_THROW(make_permutation(kTernary, "0", "z"), Error);
}

TEST(Sequential, IdentityFirstRelabelsOutcomes) {
  const auto a = make_std(kTernary);
  const auto c = compose_sequential(make_identity(3, 1), a);
  ASSERT_EQ(c.branches().size(), a.branches().size());
  for (std::size_t i = 0; i < c.branches().size(); ++i) {
    EXPECT_EQ(c.branches()[i].outcome, a.branches()[i].outcome);
    EXPECT_LT(max_dev(c.branches()[i].op, a.branches()[i].op), 1e-15);
  }
}

TEST(Sequential, PermutationIsInvolution) {
  const auto p = make_permutation(kBinary, "0", "1");
  const auto c = compose_sequential(p, p);
  ASSERT_EQ(c.branches().size(), 1u);
  EXPECT_LT(max_dev(c.branches()[0].op, Matrix::Identity(2, 2)), 1e-15);
}

TEST(Sequential, RepeatedMeasurementRepeatsOutcome) {
  const auto s = make_std(kBinary);
  const auto c = compose_sequential(s, s);
  ASSERT_EQ(c.branches().size(), 4u);
  for (const auto& b : c.branches()) {
    const int tau = b.outcome[0] - '0', gamma = b.outcome[2] - '0';
    Matrix expect = Matrix::Zero(2, 2);
    if (tau == gamma) expect(tau, tau) = 1;
    EXPECT_LT(max_dev(b.op, expect), 1e-15) << b.outcome;
  }
  EXPECT_TRUE(check_completeness(c).ok);
}

TEST(Spatial, IdentityThenStdMeasuresSecondCell) {
  const auto c = compose_spatial(make_identity(2, 1), make_std(kBinary));
  const auto psi = make(2, 2, {0.5, 0.5, 0.5, 0.5});
  const auto b = apply_branching(psi, std::vector<std::size_t>{0, 1}, c);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].outcome, "0");
  // First cell stays in |+>.
  EXPECT_NEAR(fidelity(b[0].state, make(2, 2, {kR, 0, kR, 0})), 1.0, 1e-12);
}

TEST(Spatial, StdStdMeasuresBoth) {
  const auto c = compose_spatial(make_std(kBinary), make_std(kBinary));
  ASSERT_EQ(c.branches().size(), 4u);
  EXPECT_EQ(c.outcomes(), (std::vector<std::string>{"0.0", "0.1", "1.0", "1.1"}));
  for (std::size_t i = 0; i < 4; ++i) {
    Matrix e = Matrix::Zero(4, 4);
    e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1;
    EXPECT_LT(max_dev(c.branches()[i].op, e), 1e-15);
  }
}

TEST(Spatial, BlankTestWithPermutationIsComplete) {
  EXPECT_TRUE(check_completeness(compose_spatial(make_blank_test(kTernary, "#"),
                                                 make_permutation(kTernary, "0", "1"))).ok);
}

TEST(Spatial, RandomCompositionsStayComplete) {
  std::mt19937_64 rng(11);
  const std::vector<AdmissibleTransformation> pool{
      make_std(kTernary), make_blank_test(kTernary, "#"), make_permutation(kTernary, "#", "1"),
      make_diagonal(kTernary, "0", "1"), make_unitary(3, testing::random_unitary(3, rng))};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 30; ++i) {
    const auto a = pool[pick(rng)], b = pool[pick(rng)], c = pool[pick(rng)];
    EXPECT_TRUE(check_completeness(compose_spatial(a, b)).ok);
    EXPECT_TRUE(check_completeness(compose_sequential(compose_sequential(a, b), c)).ok);
  }
}

TEST(Embed, OneCellAtFirstOfTwo) {
  const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const std::vector<std::size_t> t{0};
  const Matrix e = embed_on_cells(x, 2, t, 2);
  const Vector out = e * StateVector::basis(2, {0, 0}).amplitudes();
  EXPECT_NEAR(std::abs(out[2] - 1.0), 0.0, 1e-15);  // |10>
}

TEST(Embed, ReversedSwapMatchesPermutationMatrix) {
  const std::size_t d = 3;
  const std::vector<std::size_t> t{2, 0};
  const Matrix e = embed_on_cells(make_swap(kTernary).branches()[0].op, d, t, 3);
  Matrix brute = Matrix::Zero(27, 27);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      for (std::size_t c = 0; c < d; ++c) {
        brute(static_cast<Eigen::Index>(c * 9 + b * 3 + a), static_cast<Eigen::Index>(a * 9 + b * 3 + c)) = 1;
      }
    }
  }
  EXPECT_LT(max_dev(e, brute), 1e-15);
}

TEST(Embed, IdentityStaysIdentity) {
  const std::vector<std::size_t> t{1};
  EXPECT_LT(max_dev(embed_on_cells(Matrix::Identity(3, 3), 3, t, 3), Matrix::Identity(27, 27)), 1e-15);
}

TEST(Embed, RejectsBadTargets) {
  const std::vector<std::size_t> dup{0, 0};
  EXPECT_THROW(embed_on_cells(Matrix::Identity(4, 4), 2, dup, 2), Error);
  const std::vector<std::size_t> out_of_range{3};
  EXPECT_THROW(embed_on_cells(Matrix::Identity(2, 2), 2, out_of_range, 2), Error);
}

TEST(Branching, StdOnBasis) {
  const auto b = apply_branching(StateVector::basis(2, {0}), std::vector<std::size_t>{0}, make_std(kBinary));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].outcome, "0");
  EXPECT_NEAR(b[0].probability, 1.0, 1e-15);
}

TEST(Branching, StdOnBellPairMatchesProjectorOracle) {
  const auto bell = make(2, 2, {kR, 0, 0, kR});
  const auto b = apply_branching(bell, std::vector<std::size_t>{0}, make_std(kBinary));
  ASSERT_EQ(b.size(), 2u);
  for (int tau = 0; tau < 2; ++tau) {
    Matrix p = Matrix::Zero(2, 2);
    p(tau, tau) = 1;
    const Vector v = testing::apply_one_cell(bell.amplitudes(), 2, 2, 0, p);
    EXPECT_EQ(b[static_cast<std::size_t>(tau)].outcome, std::to_string(tau));
    EXPECT_NEAR(b[static_cast<std::size_t>(tau)].probability, v.squaredNorm(), 1e-12);
    EXPECT_NEAR(overlap(b[static_cast<std::size_t>(tau)].state.amplitudes(), v), 1.0, 1e-12);
  }
  EXPECT_NEAR(b[0].probability, 0.5, 1e-12);
}

TEST(Branching, BlankTestSplitsMass) {
  const auto psi = make(3, 1, {std::sqrt(0.3), std::sqrt(0.7), 0});
  const auto b = apply_branching(psi, std::vector<std::size_t>{0}, make_blank_test(kTernary, "#"));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].outcome, "#");
  EXPECT_NEAR(b[0].probability, 0.3, 1e-12);
  EXPECT_NEAR(fidelity(b[0].state, StateVector::basis(3, {0})), 1.0, 1e-12);
  EXPECT_EQ(b[1].outcome, "!#");
  EXPECT_NEAR(b[1].probability, 0.7, 1e-12);
  EXPECT_NEAR(fidelity(b[1].state, StateVector::basis(3, {1})), 1.0, 1e-12);
}

TEST(Branching, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const StateVector psi(3, 2, testing::random_state(9, rng));
    const auto t = compose_spatial(make_diagonal(kTernary, "0", "#"), make_std(kTernary));
    double total = 0.0;
    for (const auto& b : apply_branching(psi, std::vector<std::size_t>{1, 0}, t, 0.0)) {
      total += b.probability;
      EXPECT_NEAR(b.state.amplitudes().norm(), 1.0, 1e-9);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Sampling, SingleBranchAlwaysChosen) {
  std::vector<Branch> one{{"x", StateVector::basis(2, {0}), 1.0}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    EXPECT_EQ(sample_branch(one, rng).outcome, "x");
  }
}

TEST(Sampling, EvenSplitWithinThreeSigma) {
  std::vector<Branch> two{{"a", StateVector::basis(2, {0}), 0.5}, {"b", StateVector::basis(2, {1}), 0.5}};
  std::mt19937_64 rng(2026);
  int a = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) a += sample_branch(two, rng).outcome == "a";
  EXPECT_NEAR(a / static_cast<double>(n), 0.5, 3 * 0.005);
}

TEST(Sampling, SeedDeterminesSequence) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  std::mt19937_64 r1(99), r2(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_index(p, r1), sample_index(p, r2));
}

TEST(Sampling, EmptyListThrows) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_branch(std::vector<Branch>{}, rng), Error);
}

TEST(Fidelity, Examples) {
  const auto plus = make(2, 1, {kR, kR});
  EXPECT_NEAR(fidelity(plus, plus), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(StateVector::basis(2, {0}), StateVector::basis(2, {1})), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(StateVector::basis(2, {0}), plus), 0.5, 1e-15);
  EXPECT_THROW(fidelity(StateVector::basis(2, {0}), StateVector::basis(2, {0, 0})), Error);
}

TEST(Entanglement, ProductState) {
  const std::vector<std::size_t> first{0};
  const auto p = entanglement_profile(StateVector::basis(2, {0, 1}), first);
  EXPECT_EQ(p.schmidt_rank, 1u);
  EXPECT_NEAR(p.purity, 1.0, 1e-12);
}

TEST(Entanglement, SeparationState) {
  // (|#0> + |0#>)/sqrt2 over {#,0,1}
  Vector v = Vector::Zero(9);
  v[1] = kR;
  v[3] = kR;
  const StateVector s(3, 2, v);
  const std::vector<std::size_t> first{0};
  const auto p = entanglement_profile(s, first);
  EXPECT_EQ(p.schmidt_rank, 2u);
  EXPECT_NEAR(p.purity, 0.5, 1e-12);
  const Matrix rho = testing::reduced_one_cell(v, 3, 2, 0);
  EXPECT_NEAR((rho * rho).trace().real(), p.purity, 1e-12);
}

TEST(Entanglement, BellPair) {
  const std::vector<std::size_t> second{1};
  const auto p = entanglement_profile(make(2, 2, {kR, 0, 0, kR}), second);
  EXPECT_EQ(p.schmidt_rank, 2u);
  EXPECT_NEAR(p.purity, 0.5, 1e-12);
}

TEST(Entanglement, RejectsTrivialCut) {
  const std::vector<std::size_t> none{};
  const std::vector<std::size_t> all{0, 1};
  EXPECT_THROW(entanglement_profile(StateVector::basis(2, {0, 1}), none), Error);
  EXPECT_THROW(entanglement_profile(StateVector::basis(2, {0, 1}), all), Error);
}

TEST(Dilation, UnitaryBlockEmbedding) {
  std::mt19937_64 rng(23);
  const Matrix u = testing::random_unitary(2, rng);
  const Alphabet reg{"#", "_"};
  const Matrix v = dilate_admissible(make_unitary(2, u), reg);
  ASSERT_EQ(v.rows(), 4);
  EXPECT_TRUE(is_unitary(v));
  const std::size_t lam = outcome_register_index(reg, 1, "_");
  for (Eigen::Index b = 0; b < 2; ++b) {
    for (Eigen::Index a = 0; a < 2; ++a) {
      EXPECT_NEAR(std::abs(v(a * 2 + static_cast<Eigen::Index>(lam), b * 2) - u(a, b)), 0.0, 1e-12);
    }
  }
}

TEST(Dilation, StdColumns) {
  const Alphabet reg{"#", "0", "1"};
  const Matrix v = dilate_admissible(make_std(kBinary), reg);
  EXPECT_TRUE(is_unitary(v));
  // V|0>|#> = |0>|0'>, V|1>|#> = |1>|1'>
  EXPECT_NEAR(std::abs(v(0 * 3 + 1, 0 * 3 + 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(v(1 * 3 + 2, 1 * 3 + 0) - 1.0), 0.0, 1e-12);
}

TEST(Dilation, ReproducesBranchingStatistics) {
  std::mt19937_64 rng(29);
  const Alphabet reg{"#", "a", "b", "c"};
  for (int i = 0; i < 20; ++i) {
    // Random three-outcome instrument from a random isometry.
    const Matrix w = testing::random_unitary(9, rng).leftCols(3);
    std::vector<KrausBranch> br;
    for (int k = 0; k < 3; ++k) br.push_back({std::string(1, static_cast<char>('a' + k)), w.middleRows(3 * k, 3)});
    const AdmissibleTransformation t("rand", 3, 1, 1, br);
    ASSERT_TRUE(check_completeness(t).ok);
    const StateVector psi(3, 1, testing::random_state(3, rng));
    const Matrix v = dilate_admissible(t, reg);
    ASSERT_TRUE(is_unitary(v));
    Vector in = Vector::Zero(12);
    for (Eigen::Index s = 0; s < 3; ++s) in[s * 4] = psi[static_cast<std::size_t>(s)];
    const Vector out = v * in;
    const auto branches = apply_branching(psi, std::vector<std::size_t>{0}, t, 0.0);
    double tv = 0.0;
    for (const auto& b : branches) {
      const auto r = static_cast<Eigen::Index>(outcome_register_index(reg, 1, b.outcome));
      double p = 0.0;
      for (Eigen::Index s = 0; s < 3; ++s) p += std::norm(out[s * 4 + r]);
      tv += std::abs(p - b.probability) / 2;
    }
    EXPECT_LE(tv, 1e-9);
  }
}

struct ReflectionRun {
  double success = 0.0;
  Vector data;
};

// Measures {P_T, P_F} on |phi>|T> then the ancilla; returns the F branch.
ReflectionRun reflect(const Matrix& v, const Vector& phi) {
  const auto rm = reflection_measurement(v);
  const Eigen::Index n = phi.size();
  Vector in = Vector::Zero(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) in[2 * i] = phi[i];
  ReflectionRun r;
  for (const auto& br : rm.measurement.branches()) {
    const Vector after = br.op * in;
    Vector anc_f(n);
    for (Eigen::Index i = 0; i < n; ++i) anc_f[i] = after[2 * i + 1];
    r.success += anc_f.squaredNorm();
    if (anc_f.squaredNorm() > 1e-12) r.data = anc_f;
  }
  return r;
}

TEST(Reflection, IdentityHalfSuccess) {
  std::mt19937_64 rng(31);
  const Vector phi = testing::random_state(2, rng);
  const auto r = reflect(Matrix::Identity(2, 2), phi);
  EXPECT_NEAR(r.success, 0.5, 1e-12);
  EXPECT_NEAR(overlap(r.data, phi), 1.0, 1e-12);
}

TEST(Reflection, HadamardAppliedOnSuccess) {
  std::mt19937_64 rng(37);
  const Matrix h = testing::gate("H");
  for (int i = 0; i < 10; ++i) {
    const Vector phi = testing::random_state(2, rng);
    const auto rm = reflection_measurement(h);
    const Vector in = [&] {
      Vector v = Vector::Zero(4);
      v[0] = phi[0];
      v[2] = phi[1];
      return v;
    }();
    // F-ancilla component of each branch is +/- H|phi>/2.
    for (const auto& br : rm.measurement.branches()) {
      const Vector after = br.op * in;
      Vector f(2);
      f << after[1], after[3];
      EXPECT_NEAR(f.squaredNorm(), 0.25, 1e-12);
      EXPECT_NEAR(overlap(f, h * phi), 1.0, 1e-9);
    }
  }
}

TEST(Reflection, InvolutionAndHermitian) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    const auto rm = reflection_measurement(testing::random_unitary(3, rng));
    const Matrix& r = rm.reflection;
    EXPECT_LT(max_dev(r * r, Matrix::Identity(r.rows(), r.cols())), 1e-9);
    EXPECT_LT(max_dev(r, r.adjoint()), 1e-9);
    EXPECT_TRUE(is_projective(rm.measurement));
  }
}

TEST(Reflection, RejectsNonUnitary) {
  EXPECT_THROW(reflection_measurement((Matrix(2, 2) << 1, 1, 0, 1).finished()), Error);
}

TEST(Outcomes, VoidIsUnit) {
  EXPECT_EQ(concat_outcomes("_", "0"), "0");
  EXPECT_EQ(concat_outcomes("1", "_"), "1");
  EXPECT_EQ(concat_outcomes("1", "0"), "1.0");
}

}  // namespace
}  // namespace cqtm
