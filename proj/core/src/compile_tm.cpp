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


#include <algorithm>
#include <set>

#include "cqtm/compilers.hpp"

namespace cqtm {

namespace {

std::string fresh_initial(const ClassicalTM& tm) {
  std::set<std::string> used;
  for (const auto& [key, a] : tm.delta) {
    used.insert(key.first);
    used.insert(a.next);
  }
  used.insert(tm.initial);
  std::string s = tm.initial + "'";
  while (used.count(s)) s += "'";
  return s;
}

void check_state_names(const ClassicalTM& tm) {
  for (const auto& [key, a] : tm.delta) {
    for (const auto* q : {&key.first, &a.next}) {
      if (q->find('@') != std::string::npos) {
        throw Error("tm state '" + *q + "' uses the reserved character '@'");
      }
    }
  }
}

MachineDescription tm_frame(const ClassicalTM& tm, const std::string& suffix, MachineKind kind,
                            std::vector<std::string> extra_outcomes) {
  validate_tm(tm);
  check_state_names(tm);
  MachineDescription m;
  m.name = tm.name + suffix;
  m.kind = kind;
  m.tape_count = 1;
  m.initial = fresh_initial(tm);
  m.quantum = Alphabet(tm.alphabet);
  auto c = tm.alphabet;
  for (auto& e : extra_outcomes) c.push_back(std::move(e));
  m.classical = with_reserved_outcomes(Alphabet(c));
  m.add_transform("Std", make_std(m.quantum));
  add_blank_tests(m);
  m.add_transition(m.initial, std::string(sym::kBlank), Transition{tm.initial, {Move::kStay}, "Std"});
  return m;
}

}  // namespace

MachineDescription compile_tm_to_cqtm(const ClassicalTM& tm) {
  MachineDescription m = tm_frame(tm, "_cqtm", MachineKind::kCqtm, {});
  for (const auto& [key, a] : tm.delta) {
    const auto& [q, tau] = key;
    const std::string perm = "P_" + tau + "_" + a.write;
    if (!m.transforms.count(perm)) m.add_transform(perm, make_permutation(m.quantum, tau, a.write));
    const std::string mid = q + "@" + tau;
    m.add_transition(q, tau, Transition{mid, {Move::kStay}, perm});
    m.add_transition(mid, std::string(sym::kVoid), Transition{a.next, {a.move}, "Std"});
  }
  return m;
}

MachineDescription compile_tm_to_mqtm(const ClassicalTM& tm) {
  MachineDescription m = tm_frame(tm, "_mqtm", MachineKind::kMqtm,
                                  {std::string(sym::kTop), std::string(sym::kBottom)});
  for (const auto& [key, a] : tm.delta) {
    const auto& [q, tau] = key;
    const auto& sigma = a.write;
    if (tau == sigma) {
      m.add_transition(q, tau, Transition{a.next, {a.move}, "Std"});
      continue;
    }
    const std::string diag = "O_" + tau + "_" + sigma;
    if (!m.transforms.count(diag)) m.add_transform(diag, make_diagonal(m.quantum, tau, sigma));
    const std::string probe = q + "@" + tau + ">" + sigma;
    const std::string check = probe + "'";
    m.add_transition(q, tau, Transition{probe, {Move::kStay}, diag});
    m.add_transition(probe, std::string(sym::kTop), Transition{check, {Move::kStay}, "Std"});
    m.add_transition(probe, std::string(sym::kBottom), Transition{check, {Move::kStay}, "Std"});
    m.add_transition(check, sigma, Transition{a.next, {a.move}, "Std"});
    m.add_transition(check, tau, Transition{probe, {Move::kStay}, diag});
  }
  return m;
}

std::optional<StateVector> translate_state(const StateVector& s, const Alphabet& from,
                                           const Alphabet& to) {
  if (s.cells() == 0) return StateVector();
  std::vector<int> map(from.size(), -1);
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (auto j = to.find(from[i])) map[i] = *j;
  }
  const std::size_t size = checked_pow(to.size(), s.cells(), amplitude_cap());
  if (size == 0) throw Error("translated state exceeds the amplitude cap");
  Vector out = Vector::Zero(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::norm(s[i]) <= tol::kPrune) continue;
    std::size_t j = 0;
    for (std::size_t c = 0; c < s.cells(); ++c) {
      const int k = map[static_cast<std::size_t>(s.digit(i, c))];
      if (k < 0) return std::nullopt;
      j = j * to.size() + static_cast<std::size_t>(k);
    }
    out[static_cast<Eigen::Index>(j)] = s[i];
  }
  return StateVector(to.size(), s.cells(), out / out.norm(), 1e-6);
}

}  // namespace cqtm
