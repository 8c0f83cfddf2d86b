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
#include <cmath>
#include <set>

#include "cqtm/compilers.hpp"
#include "cqtm/dilation.hpp"

namespace cqtm {

namespace {

// Cells of the target machine are triples (symbol, outcome, flag) with the
// flag in {T, F}, flattened as symbol-major.
struct CellLayout {
  std::size_t d = 0;  // |Sigma_Q|
  std::size_t c = 0;  // |Sigma_C|
  std::size_t side() const { return d * c * 2; }
};

std::string cell_name(const std::string& phi, const std::string& c, bool flag_top) {
  if (c == sym::kBlank && flag_top) return phi;
  return phi + "/" + c + "/" + (flag_top ? "T" : "F");
}

// Reorders an operator over [symbols^j, outcomes^j, flags^j] into cell-major
// order.
Matrix regroup(const Matrix& op, const CellLayout& l, std::size_t j) {
  const std::size_t n = op_side(l.side(), j);
  if (static_cast<std::size_t>(op.rows()) != n) throw Error("regroup: operator size mismatch");
  const std::size_t cs = op_side(l.c, j);
  const std::size_t rs = std::size_t{1} << j;
  std::vector<std::size_t> perm(n);
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t phis = g / (cs * rs);
    std::size_t outs = (g / rs) % cs;
    std::size_t flags = g % rs;
    std::vector<std::size_t> cell(j);
    for (std::size_t i = j; i-- > 0;) {
      const std::size_t phi = phis % l.d;
      const std::size_t c = outs % l.c;
      const std::size_t r = flags % 2;
      phis /= l.d;
      outs /= l.c;
      flags /= 2;
      cell[i] = (phi * l.c + c) * 2 + r;
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < j; ++i) idx = idx * l.side() + cell[i];
    perm[g] = idx;
  }
  Matrix out = Matrix::Zero(op.rows(), op.cols());
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Complex v = op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (v != Complex(0.0)) out(static_cast<Eigen::Index>(perm[a]), static_cast<Eigen::Index>(perm[b])) = v;
    }
  }
  return out;
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

Matrix on_flag(const CellLayout& l, const Matrix& m) { return kron(identity(l.d * l.c), m); }
Matrix on_outcome(const CellLayout& l, const Matrix& m) { return kron(kron(identity(l.d), m), identity(2)); }

Matrix ket_projector(const Vector& v) { return v * v.adjoint(); }

class MqtmCompiler {
 public:
  MqtmCompiler(const MachineDescription& src, const MqtmOptions& opt) : src_(src), opt_(opt) {
    l_.d = src.quantum.size();
    l_.c = src.classical.size();
    if (!src.quantum.contains(sym::kBlank) || !src.classical.contains(sym::kBlank)) {
      throw Error("cqtm2mqtm: source alphabets need '#'");
    }
    invalid_ = "invalid";
    while (src.classical.contains(invalid_)) invalid_ += "'";
  }

  MachineDescription run() {
    require_valid(src_);
    for (const auto& [key, tr] : src_.delta) {
      for (const auto* q : {&key.first, &tr.next}) {
        if (q->find('^') != std::string::npos) {
          throw Error("cqtm2mqtm: state '" + *q + "' uses the reserved character '^'");
        }
      }
    }
    out_.name = src_.name + (opt_.stage1_only ? "_stage1" : "_mqtm");
    out_.kind = opt_.stage1_only ? MachineKind::kCqtm : MachineKind::kMqtm;
    out_.tape_count = src_.tape_count;
    build_alphabets();
    out_.initial = entry(src_.initial, std::string(sym::kBlank));
    add_blank_tests(out_);
    for (const auto& [key, tr] : src_.delta) emit_transition(key.first, key.second, tr);
    return out_;
  }

 private:
  static std::string entry(const std::string& q, const std::string& c) { return q + "^" + c; }

  void build_alphabets() {
    std::vector<std::string> cells(l_.side());
    for (std::size_t phi = 0; phi < l_.d; ++phi) {
      for (std::size_t c = 0; c < l_.c; ++c) {
        for (std::size_t r = 0; r < 2; ++r) {
          cells[(phi * l_.c + c) * 2 + r] = cell_name(src_.quantum[phi], src_.classical[c], r == 0);
        }
      }
    }
    out_.quantum = Alphabet(cells);
    auto cls = src_.classical.symbols();
    for (const std::string& extra : {std::string(sym::kTop), std::string(sym::kBottom), invalid_}) {
      if (std::find(cls.begin(), cls.end(), extra) == cls.end()) cls.push_back(extra);
    }
    out_.classical = with_reserved_outcomes(Alphabet(cls));
  }

  std::size_t outcome_index(const std::string& c) const {
    return static_cast<std::size_t>(src_.classical.index(c));
  }

  // Transforms on the flag / outcome parts of a single cell, one per tape.
  std::string flag_std(std::size_t tape) {
    const std::string name = "RStd_" + std::to_string(tape + 1);
    if (!out_.transforms.count(name)) {
      Matrix t = Matrix::Zero(2, 2), f = Matrix::Zero(2, 2);
      t(0, 0) = 1.0;
      f(1, 1) = 1.0;
      out_.add_transform(name, make_observable(l_.side(), {{std::string(sym::kTop), on_flag(l_, t)},
                                                           {std::string(sym::kBottom), on_flag(l_, f)}}),
                         {tape});
    }
    return name;
  }

  std::string flag_diag(std::size_t tape) {
    const std::string name = "RDiag_" + std::to_string(tape + 1);
    if (!out_.transforms.count(name)) {
      Vector plus(2), minus(2);
      plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
      out_.add_transform(name,
                         make_observable(l_.side(), {{std::string(sym::kTop), on_flag(l_, ket_projector(plus))},
                                                     {std::string(sym::kBottom), on_flag(l_, ket_projector(minus))}}),
                         {tape});
    }
    return name;
  }

  std::string outcome_std(std::size_t tape) {
    const std::string name = "CStd_" + std::to_string(tape + 1);
    if (!out_.transforms.count(name)) {
      std::vector<KrausBranch> br;
      for (std::size_t c = 0; c < l_.c; ++c) {
        Matrix p = Matrix::Zero(static_cast<Eigen::Index>(l_.c), static_cast<Eigen::Index>(l_.c));
        p(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) = 1.0;
        br.push_back({src_.classical[c], on_outcome(l_, p)});
      }
      out_.add_transform(name, make_observable(l_.side(), std::move(br)), {tape});
    }
    return name;
  }

  std::string outcome_diag(std::size_t tape, const std::string& c) {
    const std::string name = "CDiag_" + std::to_string(tape + 1) + "_" + c;
    if (!out_.transforms.count(name)) {
      const auto ic = static_cast<Eigen::Index>(outcome_index(c));
      const auto ib = static_cast<Eigen::Index>(outcome_index(std::string(sym::kBlank)));
      Vector plus = Vector::Zero(static_cast<Eigen::Index>(l_.c));
      Vector minus = plus;
      plus[ic] = minus[ic] = 1.0 / std::sqrt(2.0);
      plus[ib] = 1.0 / std::sqrt(2.0);
      minus[ib] = -1.0 / std::sqrt(2.0);
      const Matrix pp = ket_projector(plus), pm = ket_projector(minus);
      const Matrix rest = identity(l_.c) - pp - pm;
      std::vector<KrausBranch> br{{std::string(sym::kTop), on_outcome(l_, pp)},
                                  {std::string(sym::kBottom), on_outcome(l_, pm)}};
      if (l_.c > 2) br.push_back({invalid_, on_outcome(l_, rest)});
      out_.add_transform(name, make_observable(l_.side(), std::move(br)), {tape});
    }
    return name;
  }

  std::string outcome_perm(std::size_t tape, const std::string& c) {
    const std::string name = "CPerm_" + std::to_string(tape + 1) + "_" + c;
    if (!out_.transforms.count(name)) {
      const auto ic = static_cast<Eigen::Index>(outcome_index(c));
      const auto ib = static_cast<Eigen::Index>(outcome_index(std::string(sym::kBlank)));
      Matrix p = identity(l_.c);
      p(ic, ic) = p(ib, ib) = 0.0;
      p(ic, ib) = p(ib, ic) = 1.0;
      out_.add_transform(name, make_unitary(l_.side(), on_outcome(l_, p)), {tape});
    }
    return name;
  }

  // Unitary (stage 1) or reflection measurement (stage 2) for a source
  // transform, and its outcome read-out.
  void lift_transform(const std::string& name) {
    if (lifted_.count(name)) return;
    lifted_.insert(name);
    const BoundTransform& b = src_.transform(name);
    const std::size_t j = b.transform.arity();
    const Matrix v = dilate_admissible(b.transform, src_.classical);
    if (opt_.stage1_only) {
      out_.add_transform("U_" + name, make_unitary(l_.side(), regroup(kron(v, identity(std::size_t{1} << j)), l_, j)),
                         b.tapes);
    } else {
      const auto rm = reflection_measurement(v, j);
      std::vector<KrausBranch> br;
      for (const auto& p : rm.measurement.branches()) br.push_back({p.outcome, regroup(p.op, l_, j)});
      out_.add_transform("V_" + name, make_observable(l_.side(), std::move(br)), b.tapes);
    }
    // Read-out of the outcome written into the first operand's outcome part.
    const std::size_t cs = op_side(l_.c, j);
    const std::size_t dn = op_side(l_.d, j);
    const std::size_t rn = std::size_t{1} << j;
    std::vector<KrausBranch> br;
    Matrix covered = Matrix::Zero(static_cast<Eigen::Index>(op_side(l_.side(), j)),
                                  static_cast<Eigen::Index>(op_side(l_.side(), j)));
    for (const auto& outcome : b.transform.outcomes()) {
      Matrix pc = Matrix::Zero(static_cast<Eigen::Index>(cs), static_cast<Eigen::Index>(cs));
      const std::size_t idx = outcome_register_index(src_.classical, j, outcome);
      pc(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = 1.0;
      Matrix full = regroup(kron(kron(identity(dn), pc), identity(rn)), l_, j);
      covered += full;
      br.push_back({outcome, std::move(full)});
    }
    br.push_back({invalid_, identity(op_side(l_.side(), j)) - covered});
    out_.add_transform("O_" + name, make_observable(l_.side(), std::move(br)), b.tapes);
  }

  void add(const std::string& q, const std::string& c, const std::string& next, std::vector<Move> moves,
           const std::string& transform) {
    out_.add_transition(q, c, Transition{next, std::move(moves), transform});
  }

  void emit_transition(const std::string& q, const std::string& c, const Transition& tr) {
    const std::string base = entry(q, c);
    const std::string voids(sym::kVoid);
    const std::vector<Move> stay(out_.tape_count, Move::kStay);
    std::vector<std::string> keys{voids};
    if (q == src_.initial && c == sym::kBlank) keys.push_back(std::string(sym::kBlank));
    const bool halting = is_halting_state(tr.next);
    auto continuation = [&](const std::string& outcome) {
      return halting ? tr.next : entry(tr.next, outcome);
    };

    const auto& named = src_.transform(tr.transform).transform;
    if (tr.transform == "-" ||
        (named.is_identity() && named.outcomes() == std::vector<std::string>{voids})) {
      for (const auto& k : keys) add(base, k, continuation(voids), tr.moves, "-");
      return;
    }
    lift_transform(tr.transform);
    const BoundTransform& b = src_.transform(tr.transform);
    const std::size_t first = b.tapes.front();
    const std::string readout = base + ".o";

    if (opt_.stage1_only) {
      const std::string applied = base + ".u";
      for (const auto& k : keys) add(base, k, applied, tr.moves, "U_" + tr.transform);
      add(applied, voids, readout, stay, "O_" + tr.transform);
    } else {
      const std::string probe = base + ".v";
      const std::string flag = base + ".l";
      const std::string fdiag = base + ".f";
      const std::string fstd = base + ".g";
      for (const auto& k : keys) add(base, k, probe, tr.moves, "V_" + tr.transform);
      for (auto o : {sym::kTop, sym::kBottom}) add(probe, std::string(o), flag, stay, flag_std(first));
      add(flag, std::string(sym::kTop), probe, stay, "V_" + tr.transform);
      add(flag, std::string(sym::kBottom), fdiag, stay, flag_diag(first));
      for (auto o : {sym::kTop, sym::kBottom}) add(fdiag, std::string(o), fstd, stay, flag_std(first));
      add(fstd, std::string(sym::kBottom), fdiag, stay, flag_diag(first));
      add(fstd, std::string(sym::kTop), readout, stay, "O_" + tr.transform);
    }

    for (const auto& outcome : b.transform.outcomes()) {
      if (outcome == sym::kBlank) {
        add(readout, outcome, continuation(outcome), stay, "-");
      } else if (opt_.stage1_only) {
        add(readout, outcome, continuation(outcome), stay, outcome_perm(first, outcome));
      } else {
        const std::string cdiag = base + ".c" + outcome;
        const std::string cstd = base + ".d" + outcome;
        add(readout, outcome, cdiag, stay, outcome_diag(first, outcome));
        for (auto o : {sym::kTop, sym::kBottom}) add(cdiag, std::string(o), cstd, stay, outcome_std(first));
        add(cstd, outcome, cdiag, stay, outcome_diag(first, outcome));
        add(cstd, std::string(sym::kBlank), continuation(outcome), stay, "-");
      }
    }
  }

  const MachineDescription& src_;
  MqtmOptions opt_;
  CellLayout l_;
  std::string invalid_;
  MachineDescription out_;
  std::set<std::string> lifted_;
};

}  // namespace

MachineDescription compile_cqtm_to_mqtm(const MachineDescription& m, const MqtmOptions& options) {
  return MqtmCompiler(m, options).run();
}

}  // namespace cqtm
