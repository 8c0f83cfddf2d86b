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

#include "cqtm/register_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace cqtm {

namespace {

void check_targets(std::span<const std::size_t> targets, std::size_t cells) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= cells) {
      throw Error("target cell " + std::to_string(targets[i]) + " out of range (register has " +
                  std::to_string(cells) + " cells)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw Error("duplicate target cell " + std::to_string(targets[i]));
    }
  }
}

// Offsets of every sub-index of the targets, first target most significant.
std::vector<std::size_t> target_offsets(std::size_t dim, std::size_t cells,
                                        std::span<const std::size_t> targets) {
  std::vector<std::size_t> offs{0};
  for (std::size_t t : targets) {
    const std::size_t stride = cell_stride(dim, cells, t);
    std::vector<std::size_t> next;
    next.reserve(offs.size() * dim);
    for (std::size_t o : offs) {
      for (std::size_t d = 0; d < dim; ++d) next.push_back(o + d * stride);
    }
    offs = std::move(next);
  }
  return offs;
}

bool targets_zero(std::size_t index, std::size_t dim, std::span<const std::size_t> strides) {
  for (std::size_t s : strides) {
    if ((index / s) % dim != 0) return false;
  }
  return true;
}

}  // namespace

Vector apply_on_cells(const Vector& amps, std::size_t dim, std::size_t cells, const Matrix& op,
                      std::span<const std::size_t> targets) {
  check_targets(targets, cells);
  const std::size_t sub = op_side(dim, targets.size());
  if (static_cast<std::size_t>(op.rows()) != sub || static_cast<std::size_t>(op.cols()) != sub) {
    throw Error("operator shape does not match " + std::to_string(targets.size()) + " target cells");
  }
  const auto offs = target_offsets(dim, cells, targets);
  std::vector<std::size_t> strides;
  for (std::size_t t : targets) strides.push_back(cell_stride(dim, cells, t));

  Vector out = Vector::Zero(amps.size());
  Vector x(static_cast<Eigen::Index>(sub));
  for (std::size_t base = 0; base < static_cast<std::size_t>(amps.size()); ++base) {
    if (!targets_zero(base, dim, strides)) continue;
    for (std::size_t j = 0; j < sub; ++j) x[static_cast<Eigen::Index>(j)] = amps[static_cast<Eigen::Index>(base + offs[j])];
    const Vector y = op * x;
    for (std::size_t j = 0; j < sub; ++j) out[static_cast<Eigen::Index>(base + offs[j])] = y[static_cast<Eigen::Index>(j)];
  }
  return out;
}

Matrix embed_on_cells(const Matrix& op, std::size_t dim, std::span<const std::size_t> targets,
                      std::size_t register_size) {
  const std::size_t side = op_side(dim, register_size);
  if (side > 4096) throw Error("embed_on_cells: register too large to materialize");
  Matrix full(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  Vector e = Vector::Zero(static_cast<Eigen::Index>(side));
  for (std::size_t c = 0; c < side; ++c) {
    e.setZero();
    e[static_cast<Eigen::Index>(c)] = 1.0;
    full.col(static_cast<Eigen::Index>(c)) = apply_on_cells(e, dim, register_size, op, targets);
  }
  return full;
}

std::vector<Branch> apply_branching(const StateVector& state, std::span<const std::size_t> targets,
                                    const AdmissibleTransformation& t, double prune_eps) {
  if (!t.arity_preserving()) throw Error("apply_branching needs an arity-preserving transformation");
  if (targets.size() != t.arity()) {
    throw Error("transformation '" + t.name() + "' has arity " + std::to_string(t.arity()) +
                " but " + std::to_string(targets.size()) + " targets were given");
  }
  if (state.cells() > 0 && state.dim() != t.dim()) throw Error("apply_branching: alphabet size mismatch");
  std::vector<Branch> out;
  for (const auto& b : t.branches()) {
    Vector y = apply_on_cells(state.amplitudes(), t.dim(), state.cells(), b.op, targets);
    const double p = y.squaredNorm();
    if (p <= prune_eps) continue;
    y /= std::sqrt(p);
    out.push_back({b.outcome, StateVector(t.dim(), state.cells(), std::move(y)), p});
  }
  return out;
}

std::size_t sample_index(std::span<const double> probabilities, std::mt19937_64& rng) {
  if (probabilities.empty()) throw Error("sample from an empty branch list");
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (!(total > 0)) throw Error("sample from a zero-mass branch list");
  const double u = std::generate_canonical<double, 53>(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return probabilities.size() - 1;
}

const Branch& sample_branch(std::span<const Branch> branches, std::mt19937_64& rng) {
  std::vector<double> p;
  p.reserve(branches.size());
  for (const auto& b : branches) p.push_back(b.probability);
  return branches[sample_index(p, rng)];
}

namespace {

// Amplitudes arranged as (subset) x (rest).
Matrix bipartite_matrix(const StateVector& state, std::span<const std::size_t> subset) {
  const std::size_t n = state.cells();
  check_targets(subset, n);
  std::vector<std::size_t> order(subset.begin(), subset.end());
  for (std::size_t c = 0; c < n; ++c) {
    if (std::find(subset.begin(), subset.end(), c) == subset.end()) order.push_back(c);
  }
  const StateVector p = state.permuted(order);
  std::size_t da = 1;
  for (std::size_t i = 0; i < subset.size(); ++i) da *= state.dim();
  const std::size_t db = state.size() / da;
  Matrix a(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p[i * db + j];
    }
  }
  return a;
}

}  // namespace

EntanglementProfile entanglement_profile(const StateVector& state,
                                         std::span<const std::size_t> subset) {
  if (subset.empty() || subset.size() >= state.cells()) {
    throw Error("entanglement_profile needs a nonempty proper subset of cells");
  }
  const Matrix a = bipartite_matrix(state, subset);
  Eigen::JacobiSVD<Matrix> svd(a);
  EntanglementProfile r;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()[i];
    if (s > tol::kSchmidt) ++r.schmidt_rank;
    r.purity += s * s * s * s;
  }
  return r;
}

Factorization factor_out(const StateVector& state, std::span<const std::size_t> subset) {
  if (subset.size() == state.cells()) {
    std::vector<std::size_t> order(subset.begin(), subset.end());
    return {1.0, state.permuted(order).phase_normalized()};
  }
  if (subset.empty()) return {1.0, StateVector()};
  const Matrix a = bipartite_matrix(state, subset);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  Factorization f;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()[i];
    f.purity += s * s * s * s;
  }
  Vector u = svd.matrixU().col(0);
  f.subset_state = StateVector(state.dim(), subset.size(), u / u.norm()).phase_normalized();
  return f;
}

}  // namespace cqtm
