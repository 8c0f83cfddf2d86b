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


#include "cqtm/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "cqtm/register_ops.hpp"

namespace cqtm {

std::string fault_name(FaultKind k) {
  switch (k) {
    case FaultKind::kUndefinedTransition:
      return "undefined-transition";
    case FaultKind::kEntangledOutput:
      return "entangled-output";
    case FaultKind::kAmplitudeCap:
      return "amplitude-cap";
    case FaultKind::kBranchCap:
      return "branch-cap";
    case FaultKind::kInvalidInput:
      break;
  }
  return "invalid-input";
}

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::kAccept:
      return "accept";
    case VerdictKind::kReject:
      return "reject";
    case VerdictKind::kOutput:
      return "output";
    case VerdictKind::kNonHalt:
      return "nonhalt";
    case VerdictKind::kFault:
      break;
  }
  return "fault";
}

Cell Configuration::cell(std::size_t tape, long pos) const {
  const auto& w = tapes.at(tape);
  if (!w.contains(pos)) return Cell{blank, -1, {}};
  return w.cells[static_cast<std::size_t>(pos - w.lo)];
}

void Configuration::ensure(std::size_t tape, long pos) {
  auto& w = tapes.at(tape);
  if (w.cells.empty()) {
    w.lo = pos;
    w.cells.push_back(Cell{blank, -1, {}});
    return;
  }
  if (pos < w.lo) {
    w.cells.insert(w.cells.begin(), static_cast<std::size_t>(w.lo - pos), Cell{blank, -1, {}});
    w.lo = pos;
  } else if (pos > w.hi()) {
    w.cells.resize(w.cells.size() + static_cast<std::size_t>(pos - w.hi()), Cell{blank, -1, {}});
  }
}

std::vector<std::size_t> Configuration::promote(
    const std::vector<std::pair<std::size_t, long>>& targets) {
  std::vector<std::size_t> slots;
  slots.reserve(targets.size());
  for (const auto& [tape, pos] : targets) {
    ensure(tape, pos);
    Cell& c = tapes[tape].cells[static_cast<std::size_t>(pos - tapes[tape].lo)];
    if (!c.quantum()) {
      if (checked_pow(dim, quantum.cells() + 1, amplitude_cap()) == 0) {
        throw MachineFault(FaultKind::kAmplitudeCap,
                           "register of " + std::to_string(quantum.cells() + 1) +
                               " cells exceeds the amplitude cap of " +
                               std::to_string(amplitude_cap()));
      }
      quantum = quantum.tensor(c.superposed() ? StateVector(dim, 1, *c.local)
                                              : StateVector::basis(dim, {c.symbol}));
      c.local.reset();
      c.slot = static_cast<int>(layout.size());
      layout.emplace_back(tape, pos);
    }
    slots.push_back(static_cast<std::size_t>(c.slot));
  }
  return slots;
}

namespace {

// Rows: symbol of `cell`; columns: basis strings of the other cells.
Eigen::MatrixXcd unfold(const StateVector& s, std::size_t cell) {
  const std::size_t d = s.dim();
  const std::size_t stride = cell_stride(d, s.cells(), cell);
  const std::size_t n = s.size() / d;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t base = (j / stride) * stride * d + j % stride;
    for (std::size_t a = 0; a < d; ++a) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) = s[base + a * stride];
    }
  }
  return m;
}

struct PureSplit {
  Vector local;
  StateVector rest;
};

// Splits `cell` off when its reduced state has purity >= 1 - tolerance.
std::optional<PureSplit> split_pure(const StateVector& s, std::size_t cell, double tolerance) {
  const Eigen::MatrixXcd m = unfold(s, cell);
  const Eigen::MatrixXcd rho = m * m.adjoint();
  const double tr = rho.trace().real();
  if (rho.squaredNorm() < (1.0 - tolerance) * tr * tr) return std::nullopt;
  Eigen::Index col = 0;
  m.colwise().norm().maxCoeff(&col);
  Vector v = m.col(col).normalized();
  Vector rest = (v.adjoint() * m).transpose();
  if (s.cells() == 1) return PureSplit{std::move(v), StateVector()};
  rest /= rest.norm();
  return PureSplit{std::move(v), StateVector(s.dim(), s.cells() - 1, std::move(rest))};
}

}  // namespace

void Configuration::demote_definite(double tolerance, double purity_tolerance) {
  bool changed = true;
  while (changed && quantum.cells() > 0) {
    changed = false;
    for (std::size_t s = 0; s < quantum.cells(); ++s) {
      auto split = split_pure(quantum, s, purity_tolerance);
      if (!split) continue;
      const auto [tape, pos] = layout[s];
      Cell& c = tapes[tape].cells[static_cast<std::size_t>(pos - tapes[tape].lo)];
      Eigen::Index best = 0;
      const double top = split->local.cwiseAbs2().maxCoeff(&best);
      c.slot = -1;
      c.symbol = static_cast<int>(best);
      c.local.reset();
      if (top < 1.0 - tolerance) c.local = std::make_shared<const Vector>(std::move(split->local));
      quantum = std::move(split->rest);
      layout.erase(layout.begin() + static_cast<long>(s));
      for (std::size_t i = s; i < layout.size(); ++i) {
        auto& [t, q] = layout[i];
        tapes[t].cells[static_cast<std::size_t>(q - tapes[t].lo)].slot = static_cast<int>(i);
      }
      changed = true;
      break;
    }
  }
  if (quantum.cells() == 0) {
    quantum = StateVector();
    layout.clear();
    return;
  }
  // Canonical slot order: by tape, then position.
  std::vector<std::size_t> order(layout.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return layout[a] < layout[b]; });
  if (!std::is_sorted(layout.begin(), layout.end())) {
    quantum = quantum.permuted(order);
    std::vector<std::pair<std::size_t, long>> sorted;
    for (std::size_t i : order) sorted.push_back(layout[i]);
    layout = std::move(sorted);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      auto& [t, q] = layout[i];
      tapes[t].cells[static_cast<std::size_t>(q - tapes[t].lo)].slot = static_cast<int>(i);
    }
  }
}

std::size_t Configuration::window_cells() const {
  std::size_t n = 0;
  for (const auto& w : tapes) n += w.cells.size();
  return n;
}

StateVector Configuration::full_state() const {
  std::vector<std::size_t> order;
  const std::size_t nq = quantum.cells();
  StateVector s = quantum;
  std::size_t fixed = 0;
  for (const auto& w : tapes) {
    for (const auto& c : w.cells) {
      if (c.quantum()) {
        order.push_back(static_cast<std::size_t>(c.slot));
        continue;
      }
      order.push_back(nq + fixed++);
      s = s.tensor(c.superposed() ? StateVector(dim, 1, *c.local) : StateVector::basis(dim, {c.symbol}));
    }
  }
  if (s.cells() == 0) return s;
  return s.permuted(order);
}

double Configuration::non_blank_mass(std::size_t tape, long pos) const {
  const Cell c = cell(tape, pos);
  if (c.superposed()) return std::max(0.0, 1.0 - std::norm((*c.local)[blank]));
  if (!c.quantum()) return c.symbol == blank ? 0.0 : 1.0;
  const auto p = quantum.marginal(static_cast<std::size_t>(c.slot));
  return std::max(0.0, 1.0 - p[static_cast<std::size_t>(blank)]);
}

std::string Configuration::classical_key() const {
  std::string key = internal + '\x1f' + last_outcome + '\x1f';
  for (long h : heads) key += std::to_string(h) + ',';
  for (const auto& w : tapes) {
    key += '|' + std::to_string(w.lo) + ':';
    for (const auto& c : w.cells) {
      if (c.quantum()) {
        key += "q" + std::to_string(c.slot) + ",";
      } else if (c.superposed()) {
        key += "l,";
      } else {
        key += std::to_string(c.symbol) + ",";
      }
    }
  }
  return key;
}

double Configuration::quantum_fidelity(const Configuration& other) const {
  double f = fidelity(quantum, other.quantum);
  for (std::size_t t = 0; t < tapes.size(); ++t) {
    const auto& a = tapes[t].cells;
    const auto& b = other.tapes.at(t).cells;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].superposed() && b.at(i).superposed()) f *= std::norm(a[i].local->dot(*b[i].local));
    }
  }
  return f;
}

Configuration init_configuration(const MachineDescription& m, const StateVector& input,
                                 bool allow_blank) {
  const std::size_t d = m.quantum.size();
  const auto blank_index = m.quantum.find(sym::kBlank);
  if (!blank_index) throw Error("machine has no blank symbol");
  if (input.cells() > 0 && input.dim() != d) {
    throw MachineFault(FaultKind::kInvalidInput,
                       "input alphabet size " + std::to_string(input.dim()) +
                           " does not match the machine's " + std::to_string(d));
  }
  if (!allow_blank) {
    double mass = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i) {
      for (std::size_t c = 0; c < input.cells(); ++c) {
        if (input.digit(i, c) == *blank_index) {
          mass += std::norm(input[i]);
          break;
        }
      }
    }
    if (mass > tol::kPrune) {
      throw MachineFault(FaultKind::kInvalidInput, "input has amplitude on strings containing '#'");
    }
  }
  Configuration c;
  c.dim = d;
  c.blank = *blank_index;
  c.internal = m.initial;
  c.last_outcome = std::string(sym::kBlank);
  c.heads.assign(m.tape_count, 0);
  c.tapes.resize(m.tape_count);
  for (auto& w : c.tapes) {
    w.lo = 0;
    w.cells.assign(1, Cell{c.blank, -1, {}});
  }
  auto& t0 = c.tapes[0];
  for (std::size_t i = 0; i < input.cells(); ++i) {
    t0.cells.push_back(Cell{c.blank, static_cast<int>(i), {}});
    c.layout.emplace_back(0, static_cast<long>(i + 1));
  }
  c.quantum = input.cells() > 0 ? input : StateVector();
  c.demote_definite();
  return c;
}

StepResult step(const MachineDescription& m, const Configuration& c, double prune_eps) {
  const Transition* tr = m.find_transition(c.internal, c.last_outcome);
  if (tr == nullptr) {
    throw MachineFault(FaultKind::kUndefinedTransition,
                       "no transition for (" + c.internal + ", " + c.last_outcome + ")");
  }
  Configuration next = c;
  for (std::size_t t = 0; t < m.tape_count; ++t) {
    const Move mv = t < tr->moves.size() ? tr->moves[t] : Move::kStay;
    if (mv == Move::kLeft) --next.heads[t];
    if (mv == Move::kRight) ++next.heads[t];
    next.ensure(t, next.heads[t]);
  }
  next.internal = tr->next;
  StepResult r;
  r.halted = is_halting_state(tr->next);
  if (tr->transform == "-") {
    next.last_outcome = std::string(sym::kVoid);
    r.branches.push_back({next.last_outcome, std::move(next), 1.0});
    return r;
  }
  const BoundTransform& b = m.transform(tr->transform);
  std::vector<std::pair<std::size_t, long>> targets;
  for (std::size_t t : b.tapes) targets.emplace_back(t, next.heads[t]);
  const auto slots = next.promote(targets);
  auto branches = apply_branching(next.quantum, slots, b.transform, prune_eps);
  for (auto& br : branches) {
    Configuration out = next;
    out.quantum = std::move(br.state);
    out.last_outcome = br.outcome;
    out.demote_definite();
    r.branches.push_back({br.outcome, std::move(out), br.probability});
  }
  return r;
}

Verdict extract_output(const MachineDescription& m, const Configuration& c) {
  Verdict v;
  if (c.internal == sym::kYes) {
    v.kind = VerdictKind::kAccept;
    return v;
  }
  if (c.internal == sym::kNo) {
    v.kind = VerdictKind::kReject;
    return v;
  }
  if (c.internal != sym::kHalt) return v;
  (void)m;
  const auto& w = c.tapes.at(0);
  long first = 0;
  long last = -1;
  bool any = false;
  for (long p = w.lo; p <= w.hi(); ++p) {
    if (c.non_blank_mass(0, p) > tol::kBlank) {
      if (!any) first = p;
      last = p;
      any = true;
    }
  }
  v.kind = VerdictKind::kOutput;
  if (!any) {
    v.output = StateVector();
    return v;
  }
  Configuration work = c;
  std::vector<std::pair<std::size_t, long>> range;
  for (long p = first; p <= last; ++p) range.emplace_back(0, p);
  const auto slots = work.promote(range);
  const auto f = factor_out(work.quantum, slots);
  if (f.purity < 1.0 - tol::kFidelity) {
    v.kind = VerdictKind::kFault;
    v.fault = fault_name(FaultKind::kEntangledOutput);
    v.output.reset();
    return v;
  }
  v.output = f.subset_state;
  return v;
}

PointedConfiguration to_pointed(const Configuration& c) {
  if (c.tapes.size() != 1) throw Error("pointed form needs a one-tape configuration");
  const StateVector full = c.full_state();
  const auto& w = c.tapes[0];
  const std::size_t n = w.cells.size();
  const std::size_t head = static_cast<std::size_t>(c.heads[0] - w.lo);
  const std::size_t d = c.dim;
  const std::size_t side = checked_pow(2 * d, n, amplitude_cap());
  if (side == 0) throw Error("pointed form exceeds the amplitude cap");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(side));
  for (std::size_t i = 0; i < full.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t cell = 0; cell < n; ++cell) {
      std::size_t digit = static_cast<std::size_t>(full.digit(i, cell));
      if (cell == head) digit += d;
      j = j * 2 * d + digit;
    }
    out[static_cast<Eigen::Index>(j)] = full[i];
  }
  return {c.internal, c.last_outcome, w.lo, StateVector(2 * d, n, std::move(out))};
}

Configuration from_pointed(const MachineDescription& m, const PointedConfiguration& p) {
  const std::size_t d = m.quantum.size();
  if (p.state.dim() != 2 * d) throw Error("pointed state has the wrong alphabet size");
  const std::size_t n = p.state.cells();
  long head = -1;
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(checked_pow(d, n, amplitude_cap())));
  for (std::size_t i = 0; i < p.state.size(); ++i) {
    if (std::norm(p.state[i]) <= tol::kPrune) continue;
    std::size_t j = 0;
    long pointed = -1;
    for (std::size_t cell = 0; cell < n; ++cell) {
      std::size_t digit = static_cast<std::size_t>(p.state.digit(i, cell));
      if (digit >= d) {
        if (pointed >= 0) throw Error("pointed state has two pointed cells");
        pointed = static_cast<long>(cell);
        digit -= d;
      }
      j = j * d + digit;
    }
    if (pointed < 0) throw Error("pointed state has no pointed cell");
    if (head >= 0 && head != pointed) throw Error("head position is not classical");
    head = pointed;
    amps[static_cast<Eigen::Index>(j)] = p.state[i];
  }
  if (head < 0) throw Error("empty pointed state");
  Configuration c;
  c.dim = d;
  c.blank = m.quantum.index(sym::kBlank);
  c.internal = p.internal;
  c.last_outcome = p.last_outcome;
  c.heads = {p.lo + head};
  c.tapes.resize(1);
  c.tapes[0].lo = p.lo;
  for (std::size_t i = 0; i < n; ++i) {
    c.tapes[0].cells.push_back(Cell{c.blank, static_cast<int>(i), {}});
    c.layout.emplace_back(0, p.lo + static_cast<long>(i));
  }
  c.quantum = StateVector(d, n, std::move(amps));
  c.demote_definite();
  return c;
}

}  // namespace cqtm
