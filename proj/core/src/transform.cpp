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

#include "cqtm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cqtm {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw Error("empty alphabet symbol");
    if (!seen.insert(s).second) throw Error("duplicate alphabet symbol '" + s + "'");
  }
}

Alphabet::Alphabet(std::initializer_list<std::string> symbols)
    : Alphabet(std::vector<std::string>(symbols)) {}

std::optional<int> Alphabet::find(std::string_view s) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == s) return static_cast<int>(i);
  }
  return std::nullopt;
}

int Alphabet::index(std::string_view s) const {
  if (auto i = find(s)) return *i;
  throw Error("symbol '" + std::string(s) + "' not in alphabet");
}

std::size_t op_side(std::size_t dim, std::size_t arity) {
  const std::size_t side = checked_pow(dim, arity, amplitude_cap());
  if (side == 0) throw Error("operator side exceeds amplitude cap");
  return side;
}

std::optional<std::size_t> log_dim(std::size_t dim, std::size_t n) {
  if (n == 0) return std::nullopt;
  if (dim == 1) return n == 1 ? std::optional<std::size_t>(1) : std::nullopt;
  std::size_t k = 0;
  while (n % dim == 0) {
    n /= dim;
    ++k;
  }
  if (n != 1) return std::nullopt;
  return k;
}

AdmissibleTransformation::AdmissibleTransformation(std::string name, std::size_t dim,
                                                   std::size_t arity_in, std::size_t arity_out,
                                                   std::vector<KrausBranch> branches)
    : name_(std::move(name)),
      dim_(dim),
      arity_in_(arity_in),
      arity_out_(arity_out),
      branches_(std::move(branches)) {
  if (branches_.empty()) throw Error("transformation '" + name_ + "' has no branches");
  const auto rows = static_cast<Eigen::Index>(op_side(dim, arity_out));
  const auto cols = static_cast<Eigen::Index>(op_side(dim, arity_in));
  std::set<std::string> seen;
  for (const auto& b : branches_) {
    if (!seen.insert(b.outcome).second) {
      throw Error("transformation '" + name_ + "' repeats outcome '" + b.outcome + "'");
    }
    if (b.op.rows() != rows || b.op.cols() != cols) {
      throw Error("transformation '" + name_ + "': branch '" + b.outcome + "' has shape " +
                  std::to_string(b.op.rows()) + "x" + std::to_string(b.op.cols()) +
                  ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
}

std::vector<std::string> AdmissibleTransformation::outcomes() const {
  std::vector<std::string> out;
  out.reserve(branches_.size());
  for (const auto& b : branches_) out.push_back(b.outcome);
  return out;
}

const KrausBranch* AdmissibleTransformation::find(std::string_view outcome) const {
  for (const auto& b : branches_) {
    if (b.outcome == outcome) return &b;
  }
  return nullptr;
}

bool AdmissibleTransformation::is_identity(double tolerance) const {
  if (branches_.size() != 1 || !arity_preserving()) return false;
  const Matrix& m = branches_.front().op;
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

CompletenessReport check_completeness(const AdmissibleTransformation& t, double tolerance) {
  const auto& br = t.branches();
  const Eigen::Index n = br.front().op.cols();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& b : br) {
    if (b.op.cols() != n || b.op.rows() != br.front().op.rows()) {
      throw Error("check_completeness: branch shapes differ in '" + t.name() + "'");
    }
    sum.noalias() += b.op.adjoint() * b.op;
  }
  sum -= Matrix::Identity(n, n);
  CompletenessReport r;
  r.max_deviation = sum.cwiseAbs().maxCoeff(&r.worst_row, &r.worst_col);
  r.ok = r.max_deviation <= tolerance;
  return r;
}

bool is_unitary(const Matrix& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tolerance;
}

bool is_projective(const AdmissibleTransformation& t, double tolerance) {
  if (!t.arity_preserving()) return false;
  const auto& br = t.branches();
  const Eigen::Index n = br.front().op.rows();
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < br.size(); ++i) {
    const Matrix& p = br[i].op;
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tolerance) return false;
    if ((p * p - p).cwiseAbs().maxCoeff() > tolerance) return false;
    for (std::size_t j = i + 1; j < br.size(); ++j) {
      if ((p * br[j].op).cwiseAbs().maxCoeff() > tolerance) return false;
    }
    sum += p;
  }
  return (sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= tolerance;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

Matrix projector_on(std::size_t d, int idx) {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  p(idx, idx) = 1.0;
  return p;
}

}  // namespace

AdmissibleTransformation make_std(const Alphabet& q) {
  std::vector<KrausBranch> br;
  for (std::size_t i = 0; i < q.size(); ++i) {
    br.push_back({q[i], projector_on(q.size(), static_cast<int>(i))});
  }
  AdmissibleTransformation t("Std", q.size(), 1, 1, std::move(br));
  t.set_definition("std").set_form(TransformForm::kObservable);
  return t;
}

AdmissibleTransformation make_blank_test(const Alphabet& q, std::string_view symbol) {
  const int i = q.index(symbol);
  const auto d = static_cast<Eigen::Index>(q.size());
  Matrix on = projector_on(q.size(), i);
  Matrix off = Matrix::Identity(d, d) - on;
  std::string neg = "!" + std::string(symbol);
  AdmissibleTransformation t("T" + std::string(symbol), q.size(), 1, 1,
                             {{std::string(symbol), on}, {neg, off}});
  t.set_definition("test " + std::string(symbol)).set_form(TransformForm::kObservable);
  return t;
}

AdmissibleTransformation make_permutation(const Alphabet& q, std::string_view a,
                                          std::string_view b) {
  const int ia = q.index(a);
  const int ib = q.index(b);
  const auto d = static_cast<Eigen::Index>(q.size());
  Matrix m = Matrix::Identity(d, d);
  if (ia != ib) {
    m(ia, ia) = 0.0;
    m(ib, ib) = 0.0;
    m(ia, ib) = 1.0;
    m(ib, ia) = 1.0;
  }
  AdmissibleTransformation t("P[" + std::string(a) + "," + std::string(b) + "]", q.size(), 1, 1,
                             {{std::string(sym::kVoid), m}});
  t.set_definition("perm " + std::string(a) + " " + std::string(b)).set_form(TransformForm::kUnitary);
  return t;
}

AdmissibleTransformation make_swap(const Alphabet& q) {
  const auto d = static_cast<Eigen::Index>(q.size());
  Matrix m = Matrix::Zero(d * d, d * d);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (Eigen::Index y = 0; y < d; ++y) m(y * d + x, x * d + y) = 1.0;
  }
  AdmissibleTransformation t("Swap", q.size(), 2, 2, {{std::string(sym::kVoid), m}});
  t.set_definition("swap").set_form(TransformForm::kUnitary);
  return t;
}

AdmissibleTransformation make_identity(std::size_t dim, std::size_t arity) {
  const auto n = static_cast<Eigen::Index>(op_side(dim, arity));
  AdmissibleTransformation t("-", dim, arity, arity,
                             {{std::string(sym::kVoid), Matrix::Identity(n, n)}});
  t.set_definition(arity == 1 ? "-" : "").set_form(TransformForm::kUnitary);
  return t;
}

AdmissibleTransformation make_unitary(std::size_t dim, const Matrix& u, std::string name) {
  const auto k = log_dim(dim, static_cast<std::size_t>(u.rows()));
  if (!k || u.rows() != u.cols()) throw Error("unitary '" + name + "': side is not a power of d");
  if (!is_unitary(u)) throw Error("matrix '" + name + "' is not unitary");
  AdmissibleTransformation t(std::move(name), dim, *k, *k, {{std::string(sym::kVoid), u}});
  t.set_form(TransformForm::kUnitary);
  return t;
}

AdmissibleTransformation make_observable(std::size_t dim, std::vector<KrausBranch> projectors,
                                         std::string name) {
  if (projectors.empty()) throw Error("observable '" + name + "' has no projectors");
  const auto k = log_dim(dim, static_cast<std::size_t>(projectors.front().op.rows()));
  if (!k) throw Error("observable '" + name + "': side is not a power of d");
  AdmissibleTransformation t(std::move(name), dim, *k, *k, std::move(projectors));
  if (!is_projective(t)) throw Error("observable '" + t.name() + "' is not a projective measurement");
  t.set_form(TransformForm::kObservable);
  return t;
}

AdmissibleTransformation make_diagonal(const Alphabet& q, std::string_view a, std::string_view b) {
  const int ia = q.index(a);
  const int ib = q.index(b);
  if (ia == ib) throw Error("diagonal measurement needs two distinct symbols");
  const auto d = static_cast<Eigen::Index>(q.size());
  Vector plus = Vector::Zero(d);
  Vector minus = Vector::Zero(d);
  plus[ia] = minus[ia] = 1.0 / std::sqrt(2.0);
  plus[ib] = 1.0 / std::sqrt(2.0);
  minus[ib] = -1.0 / std::sqrt(2.0);
  std::vector<KrausBranch> br{{std::string(sym::kTop), plus * plus.adjoint()},
                              {std::string(sym::kBottom), minus * minus.adjoint()}};
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (static_cast<int>(i) == ia || static_cast<int>(i) == ib) continue;
    br.push_back({q[i], projector_on(q.size(), static_cast<int>(i))});
  }
  AdmissibleTransformation t("O[" + std::string(a) + "," + std::string(b) + "]", q.size(), 1, 1,
                             std::move(br));
  t.set_definition("diag " + std::string(a) + " " + std::string(b))
      .set_form(TransformForm::kObservable);
  return t;
}

AdmissibleTransformation make_initialization(const Alphabet& q, std::string_view symbol) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(q.size()), 1);
  m(q.index(symbol), 0) = 1.0;
  return AdmissibleTransformation("init " + std::string(symbol), q.size(), 0, 1,
                                  {{std::string(sym::kVoid), m}});
}

AdmissibleTransformation make_destructive_measurement(const Alphabet& q) {
  std::vector<KrausBranch> br;
  for (std::size_t i = 0; i < q.size(); ++i) {
    Matrix m = Matrix::Zero(1, static_cast<Eigen::Index>(q.size()));
    m(0, static_cast<Eigen::Index>(i)) = 1.0;
    br.push_back({q[i], m});
  }
  return AdmissibleTransformation("measure", q.size(), 1, 0, std::move(br));
}

AdmissibleTransformation compose_sequential(const AdmissibleTransformation& t1,
                                            const AdmissibleTransformation& t2) {
  if (t1.dim() != t2.dim()) throw Error("compose_sequential: alphabet size mismatch");
  if (t1.arity_out() != t2.arity_in()) {
    throw Error("compose_sequential: arity mismatch (" + std::to_string(t1.arity_out()) +
                " vs " + std::to_string(t2.arity_in()) + ")");
  }
  std::vector<KrausBranch> br;
  for (const auto& m : t1.branches()) {
    for (const auto& n : t2.branches()) {
      br.push_back({concat_outcomes(m.outcome, n.outcome), n.op * m.op});
    }
  }
  AdmissibleTransformation t(t1.name() + ";" + t2.name(), t1.dim(), t1.arity_in(),
                             t2.arity_out(), std::move(br));
  return t;
}

AdmissibleTransformation compose_spatial(const AdmissibleTransformation& t1,
                                         const AdmissibleTransformation& t2) {
  if (t1.dim() != t2.dim()) throw Error("compose_spatial: alphabet size mismatch");
  op_side(t1.dim(), t1.arity_in() + t2.arity_in());
  op_side(t1.dim(), t1.arity_out() + t2.arity_out());
  std::vector<KrausBranch> br;
  for (const auto& m : t1.branches()) {
    for (const auto& n : t2.branches()) {
      br.push_back({concat_outcomes(m.outcome, n.outcome), kron(m.op, n.op)});
    }
  }
  AdmissibleTransformation t("[" + t1.name() + "," + t2.name() + "]", t1.dim(),
                             t1.arity_in() + t2.arity_in(), t1.arity_out() + t2.arity_out(),
                             std::move(br));
  const bool proj = t1.form() == TransformForm::kObservable && t2.form() != TransformForm::kKraus &&
                    (t2.form() == TransformForm::kObservable || t2.is_identity());
  const bool proj2 = t2.form() == TransformForm::kObservable && t1.is_identity();
  if (t1.form() == TransformForm::kUnitary && t2.form() == TransformForm::kUnitary) {
    t.set_form(TransformForm::kUnitary);
  } else if (proj || proj2) {
    t.set_form(TransformForm::kObservable);
  }
  return t;
}

}  // namespace cqtm
