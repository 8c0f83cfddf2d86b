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

#include "cqtm/dilation.hpp"

#include <vector>

namespace cqtm {

std::size_t outcome_register_index(const Alphabet& outcome_register, std::size_t cells,
                                   std::string_view outcome) {
  const std::size_t blank = static_cast<std::size_t>(outcome_register.index(sym::kBlank));
  std::size_t idx = static_cast<std::size_t>(outcome_register.index(outcome));
  for (std::size_t i = 1; i < cells; ++i) idx = idx * outcome_register.size() + blank;
  return idx;
}

Matrix dilate_admissible(const AdmissibleTransformation& t, const Alphabet& outcome_register) {
  if (!t.arity_preserving()) throw Error("dilate_admissible needs an arity-preserving transformation");
  const auto report = check_completeness(t);
  if (!report.ok) {
    throw Error("dilate_admissible: '" + t.name() + "' violates completeness (deviation " +
                std::to_string(report.max_deviation) + ")");
  }
  const std::size_t k = t.arity();
  const std::size_t data = op_side(t.dim(), k);
  const std::size_t reg = op_side(outcome_register.size(), k);
  const std::size_t n = data * reg;
  if (n > 8192) throw Error("dilate_admissible: dilation side " + std::to_string(n) + " too large");
  const std::size_t blank_reg = outcome_register_index(outcome_register, k, sym::kBlank);

  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<bool> filled(n, false);
  for (std::size_t x = 0; x < data; ++x) {
    const std::size_t col = x * reg + blank_reg;
    for (const auto& b : t.branches()) {
      const std::size_t c = outcome_register_index(outcome_register, k, b.outcome);
      for (std::size_t y = 0; y < data; ++y) {
        v(static_cast<Eigen::Index>(y * reg + c), static_cast<Eigen::Index>(col)) =
            b.op(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
      }
    }
    filled[col] = true;
  }

  // Complete with standard basis candidates, orthogonalized twice.
  std::vector<Eigen::Index> basis;
  for (std::size_t c = 0; c < n; ++c) {
    if (filled[c]) basis.push_back(static_cast<Eigen::Index>(c));
  }
  std::size_t candidate = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (filled[c]) continue;
    while (true) {
      if (candidate >= n) throw Error("dilate_admissible: basis completion failed");
      Vector w = Vector::Zero(static_cast<Eigen::Index>(n));
      w[static_cast<Eigen::Index>(candidate++)] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index b : basis) w -= v.col(b).dot(w) * v.col(b);
      }
      const double norm = w.norm();
      if (norm > 1e-6) {
        v.col(static_cast<Eigen::Index>(c)) = w / norm;
        basis.push_back(static_cast<Eigen::Index>(c));
        break;
      }
    }
  }
  return v;
}

ReflectionMeasurement reflection_measurement(const Matrix& v, std::size_t ancilla_cells) {
  if (!is_unitary(v)) throw Error("reflection_measurement: V is not unitary");
  if (ancilla_cells == 0) throw Error("reflection_measurement needs at least one ancilla cell");
  const Eigen::Index rest = static_cast<Eigen::Index>(std::size_t{1} << (ancilla_cells - 1));
  Matrix flip_down = Matrix::Zero(2, 2);  // |F><T|
  flip_down(1, 0) = 1.0;
  Matrix flip_up = flip_down.transpose();  // |T><F|
  const Matrix id = Matrix::Identity(rest, rest);
  Matrix r = kron(kron(v, flip_down), id) + kron(kron(v.adjoint(), flip_up), id);
  const Eigen::Index n = r.rows();
  const Matrix eye = Matrix::Identity(n, n);
  AdmissibleTransformation m("Reflect", static_cast<std::size_t>(n), 1, 1,
                             {{std::string(sym::kTop), (eye + r) / 2.0},
                              {std::string(sym::kBottom), (eye - r) / 2.0}});
  m.set_form(TransformForm::kObservable);
  return {std::move(r), std::move(m)};
}

}  // namespace cqtm
