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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cqtm/state_vector.hpp"
#include "cqtm/transform.hpp"

namespace cqtm {

/// Lifts a k-cell operator to the full register, acting on `targets` in the
/// given order and as identity elsewhere. Meant for verification; the
/// register side must stay small.
Matrix embed_on_cells(const Matrix& op, std::size_t dim, std::span<const std::size_t> targets,
                      std::size_t register_size);

/// op applied to `targets` of a register of `cells` cells of dimension `dim`.
/// The result is not renormalized.
Vector apply_on_cells(const Vector& amps, std::size_t dim, std::size_t cells, const Matrix& op,
                      std::span<const std::size_t> targets);

struct Branch {
  std::string outcome;
  StateVector state;
  double probability = 0.0;
};

/// One entry per outcome whose probability exceeds `prune_eps`, in the
/// transformation's branch order, each post-state renormalized.
std::vector<Branch> apply_branching(const StateVector& state, std::span<const std::size_t> targets,
                                    const AdmissibleTransformation& t,
                                    double prune_eps = tol::kPrune);

/// Inverse-CDF draw over the branch order; probabilities are renormalized.
const Branch& sample_branch(std::span<const Branch> branches, std::mt19937_64& rng);

/// Index form of sample_branch over a probability list.
std::size_t sample_index(std::span<const double> probabilities, std::mt19937_64& rng);

struct EntanglementProfile {
  std::size_t schmidt_rank = 0;
  double purity = 0.0;
};

/// Schmidt rank and reduced-state purity across the cut `subset` | rest.
EntanglementProfile entanglement_profile(const StateVector& state,
                                         std::span<const std::size_t> subset);

struct Factorization {
  double purity = 0.0;
  /// Dominant Schmidt vector of the subset side, phase normalized.
  StateVector subset_state;
};

/// Splits `state` across subset | rest. Exact factor when purity is 1.
Factorization factor_out(const StateVector& state, std::span<const std::size_t> subset);

}  // namespace cqtm
