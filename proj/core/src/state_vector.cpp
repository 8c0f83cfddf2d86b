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

#include "cqtm/state_vector.hpp"

#include <cmath>
#include <string>

namespace cqtm {

StateVector::StateVector() : amps_(Vector::Ones(1)) {}

StateVector::StateVector(std::size_t dim, std::size_t cells, Vector amplitudes, double norm_tol)
    : dim_(dim), cells_(cells), amps_(std::move(amplitudes)) {
  if (dim == 0) throw Error("state dimension must be positive");
  const std::size_t expected = checked_pow(dim, cells, amplitude_cap());
  if (expected == 0) throw Error("state of " + std::to_string(cells) + " cells exceeds amplitude cap");
  if (static_cast<std::size_t>(amps_.size()) != expected) {
    throw Error("amplitude count " + std::to_string(amps_.size()) + " does not match " +
                std::to_string(dim) + "^" + std::to_string(cells));
  }
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag())) {
      throw Error("non-finite amplitude");
    }
  }
  const double n2 = amps_.squaredNorm();
  if (std::abs(n2 - 1.0) > norm_tol) {
    throw Error("state not normalized (norm^2 = " + std::to_string(n2) + ")");
  }
  amps_ /= std::sqrt(n2);
}

StateVector StateVector::basis(std::size_t dim, std::span<const int> digits) {
  std::size_t index = 0;
  for (int d : digits) {
    if (d < 0 || static_cast<std::size_t>(d) >= dim) throw Error("basis digit out of range");
    index = index * dim + static_cast<std::size_t>(d);
  }
  const std::size_t size = checked_pow(dim, digits.size(), amplitude_cap());
  if (size == 0) throw Error("basis state exceeds amplitude cap");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(size));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(dim, digits.size(), std::move(v));
}

StateVector StateVector::basis(std::size_t dim, std::initializer_list<int> digits) {
  return basis(dim, std::span<const int>(digits.begin(), digits.size()));
}

std::size_t cell_stride(std::size_t dim, std::size_t cells, std::size_t cell) {
  std::size_t s = 1;
  for (std::size_t i = cell + 1; i < cells; ++i) s *= dim;
  return s;
}

int StateVector::digit(std::size_t index, std::size_t cell) const {
  return static_cast<int>((index / cell_stride(dim_, cells_, cell)) % dim_);
}

std::vector<double> StateVector::marginal(std::size_t cell) const {
  if (cell >= cells_) throw Error("marginal: cell out of range");
  std::vector<double> p(dim_, 0.0);
  const std::size_t stride = cell_stride(dim_, cells_, cell);
  for (std::size_t i = 0; i < size(); ++i) {
    p[(i / stride) % dim_] += std::norm(amps_[static_cast<Eigen::Index>(i)]);
  }
  return p;
}

StateVector StateVector::tensor(const StateVector& rhs) const {
  if (cells_ != 0 && rhs.cells_ != 0 && dim_ != rhs.dim_) {
    throw Error("tensor: alphabet size mismatch");
  }
  const std::size_t dim = cells_ == 0 ? rhs.dim_ : dim_;
  if (checked_pow(dim, cells_ + rhs.cells_, amplitude_cap()) == 0) {
    throw Error("tensor: result exceeds amplitude cap");
  }
  Vector out(amps_.size() * rhs.amps_.size());
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    out.segment(i * rhs.amps_.size(), rhs.amps_.size()) = amps_[i] * rhs.amps_;
  }
  StateVector r;
  r.dim_ = dim;
  r.cells_ = cells_ + rhs.cells_;
  r.amps_ = std::move(out);
  return r;
}

StateVector StateVector::permuted(std::span<const std::size_t> order) const {
  if (order.size() != cells_) throw Error("permuted: order length mismatch");
  std::vector<std::size_t> old_stride(cells_);
  for (std::size_t c = 0; c < cells_; ++c) old_stride[c] = cell_stride(dim_, cells_, c);
  Vector out(amps_.size());
  for (std::size_t j = 0; j < size(); ++j) {
    // j indexes the new layout; decode its digits and map back.
    std::size_t rest = j;
    std::size_t src = 0;
    for (std::size_t c = cells_; c-- > 0;) {
      const std::size_t dgt = rest % dim_;
      rest /= dim_;
      src += dgt * old_stride[order[c]];
    }
    out[static_cast<Eigen::Index>(j)] = amps_[static_cast<Eigen::Index>(src)];
  }
  StateVector r;
  r.dim_ = dim_;
  r.cells_ = cells_;
  r.amps_ = std::move(out);
  return r;
}

StateVector StateVector::phase_normalized() const {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    // Prefer the first index among near-equal magnitudes for stability.
    const double m = std::abs(amps_[i]);
    if (m > best_mag + 1e-12) {
      best_mag = m;
      best = i;
    }
  }
  StateVector r = *this;
  if (best_mag > 0) r.amps_ *= std::conj(amps_[best]) / best_mag;
  return r;
}

StateVector tensor(const StateVector& a, const StateVector& b) { return a.tensor(b); }

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size() || (a.cells() != b.cells())) throw Error("fidelity: shape mismatch");
  if (a.cells() > 0 && a.dim() != b.dim()) throw Error("fidelity: alphabet size mismatch");
  const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
  return std::min(1.0, f);
}

}  // namespace cqtm
