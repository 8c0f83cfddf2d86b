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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqtm/types.hpp"

namespace cqtm {

/// Ordered set of basis symbols of a quantum cell (or of a classical register).
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);
  Alphabet(std::initializer_list<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& operator[](std::size_t i) const { return symbols_[i]; }
  bool contains(std::string_view s) const { return find(s).has_value(); }
  std::optional<int> find(std::string_view s) const;
  /// Throws when `s` is not a symbol.
  int index(std::string_view s) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> symbols_;
};

/// How a transformation renders back into text.
enum class TransformForm { kKraus, kUnitary, kObservable };

struct KrausBranch {
  std::string outcome;
  Matrix op;
};

/// Finite collection of linear operators {M_c} with sum M_c^dag M_c = I.
///
/// Operators map `dim^arity_in` amplitudes to `dim^arity_out`. Outcome labels
/// are pairwise distinct. Construction does not check completeness; use
/// check_completeness.
class AdmissibleTransformation {
 public:
  AdmissibleTransformation() = default;
  AdmissibleTransformation(std::string name, std::size_t dim, std::size_t arity_in,
                           std::size_t arity_out, std::vector<KrausBranch> branches);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  std::size_t arity_in() const { return arity_in_; }
  std::size_t arity_out() const { return arity_out_; }
  std::size_t arity() const { return arity_in_; }
  bool arity_preserving() const { return arity_in_ == arity_out_; }
  const std::vector<KrausBranch>& branches() const { return branches_; }
  std::vector<std::string> outcomes() const;
  const KrausBranch* find(std::string_view outcome) const;

  /// Canonical textual definition (e.g. "std", "perm 0 #") when the
  /// transformation was built from a named primitive; empty otherwise.
  const std::string& definition() const { return definition_; }
  TransformForm form() const { return form_; }

  AdmissibleTransformation& set_name(std::string name) {
    name_ = std::move(name);
    return *this;
  }
  AdmissibleTransformation& set_definition(std::string def) {
    definition_ = std::move(def);
    return *this;
  }
  AdmissibleTransformation& set_form(TransformForm f) {
    form_ = f;
    return *this;
  }

  /// Single void-outcome branch.
  bool is_deterministic() const { return branches_.size() == 1; }
  bool is_identity(double tol = tol::kCompleteness) const;

 private:
  std::string name_;
  std::size_t dim_ = 1;
  std::size_t arity_in_ = 0;
  std::size_t arity_out_ = 0;
  std::vector<KrausBranch> branches_;
  std::string definition_;
  TransformForm form_ = TransformForm::kKraus;
};

struct CompletenessReport {
  bool ok = false;
  double max_deviation = 0.0;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
};

/// ||sum M^dag M - I||_max against `tolerance`. Throws on mixed branch shapes.
CompletenessReport check_completeness(const AdmissibleTransformation& t,
                                      double tolerance = tol::kCompleteness);

bool is_unitary(const Matrix& u, double tolerance = tol::kCompleteness);
/// Orthogonal projectors summing to identity.
bool is_projective(const AdmissibleTransformation& t, double tolerance = tol::kCompleteness);

Matrix kron(const Matrix& a, const Matrix& b);

// Named primitives over an alphabet whose first-class blank is "#".
AdmissibleTransformation make_std(const Alphabet& q);
AdmissibleTransformation make_blank_test(const Alphabet& q, std::string_view symbol);
AdmissibleTransformation make_permutation(const Alphabet& q, std::string_view a, std::string_view b);
AdmissibleTransformation make_swap(const Alphabet& q);
AdmissibleTransformation make_identity(std::size_t dim, std::size_t arity);
/// Throws unless `u` is unitary with side dim^k.
AdmissibleTransformation make_unitary(std::size_t dim, const Matrix& u, std::string name = "U");
/// Throws unless the projectors are orthogonal and complete.
AdmissibleTransformation make_observable(std::size_t dim, std::vector<KrausBranch> projectors,
                                         std::string name = "O");
/// Projective measurement in the basis diagonal in (a, b): outcomes T, F
/// plus one outcome per remaining symbol.
AdmissibleTransformation make_diagonal(const Alphabet& q, std::string_view a, std::string_view b);
/// |tau0><| : zero cells to one.
AdmissibleTransformation make_initialization(const Alphabet& q, std::string_view symbol);
/// |><tau| per symbol: one cell to zero.
AdmissibleTransformation make_destructive_measurement(const Alphabet& q);

/// First t1 then t2; outcomes (c, g) concatenated.
AdmissibleTransformation compose_sequential(const AdmissibleTransformation& t1,
                                            const AdmissibleTransformation& t2);
/// t1 on the leading cells, t2 on the trailing cells.
AdmissibleTransformation compose_spatial(const AdmissibleTransformation& t1,
                                         const AdmissibleTransformation& t2);

/// Integer power with overflow guard against the amplitude cap.
std::size_t op_side(std::size_t dim, std::size_t arity);

/// Greatest k with dim^k == n, or nullopt if n is not a power of dim.
std::optional<std::size_t> log_dim(std::size_t dim, std::size_t n);

}  // namespace cqtm
