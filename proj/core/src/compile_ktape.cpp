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
#include <deque>
#include <set>
#include <tuple>

#include "cqtm/compilers.hpp"
#include "cqtm/register_ops.hpp"

namespace cqtm {

namespace {

// Target tape 1 holds  ^ ^ seg_1 $ ^ seg_2 $ ... ^ seg_k $ $  where each
// segment carries one marked cell "x*" at its head. Tape 2 is a single
// work cell (carry or parked operand) plus junk written at halt.
constexpr const char* kBeg = "^";
constexpr const char* kEnd = "$";
constexpr const char* kHole = "~";
constexpr const char* kPlain = "p";
constexpr const char* kMarked = "u";

struct Cursor {
  std::string state;
  std::string outcome;
};

// Cursor plus the segment the tape-1 head is in (k + 1 is the terminator).
struct Position {
  Cursor at;
  std::size_t seg = 0;
};

struct Piece {
  std::string transform;  // name in the target machine
  std::vector<std::size_t> tapes;
  std::vector<std::string> outcomes;
};

// Sum over branches with label L of M (x) conj(M).
std::map<std::string, Matrix> channels(const AdmissibleTransformation& t) {
  std::map<std::string, Matrix> out;
  for (const auto& b : t.branches()) {
    Matrix s = kron(b.op, b.op.conjugate());
    auto it = out.find(b.outcome);
    if (it == out.end()) {
      out.emplace(b.outcome, std::move(s));
    } else {
      it->second += s;
    }
  }
  return out;
}

double channel_gap(const AdmissibleTransformation& a, const AdmissibleTransformation& b) {
  const auto ca = channels(a);
  const auto cb = channels(b);
  double gap = 0.0;
  auto side = [](const std::map<std::string, Matrix>& x, const std::map<std::string, Matrix>& y,
                 double& g) {
    for (const auto& [label, s] : x) {
      auto it = y.find(label);
      const double d = it == y.end() ? s.cwiseAbs().maxCoeff() : (s - it->second).cwiseAbs().maxCoeff();
      g = std::max(g, d);
    }
  };
  side(ca, cb, gap);
  side(cb, ca, gap);
  return gap;
}

class KtapeCompiler {
 public:
  KtapeCompiler(const MachineDescription& src, const Decompositions& dec) : src_(src), dec_(dec) {
    d_ = src.quantum.size();
    k_ = src.tape_count;
  }

  MachineDescription run() {
    require_valid(src_);
    build_alphabet();
    out_.name = src_.name + "_2tape";
    out_.kind = MachineKind::kCqtm;
    out_.tape_count = 2;
    out_.initial = "init";
    add_fixed_transforms();
    plan_pieces();
    out_.classical = with_reserved_outcomes(Alphabet(std::vector<std::string>(labels_.begin(), labels_.end())));
    add_blank_tests(out_);
    emit_setup();
    while (!pending_.empty()) {
      const auto [q, c, s] = pending_.front();
      pending_.pop_front();
      emit_transition(q, c, s);
    }
    return out_;
  }

 private:
  int mark(int i) const { return static_cast<int>(d_) + i; }
  std::size_t side() const { return 2 * d_ + 3; }
  int beg() const { return static_cast<int>(2 * d_); }
  int end() const { return static_cast<int>(2 * d_ + 1); }
  int hole() const { return static_cast<int>(2 * d_ + 2); }

  void build_alphabet() {
    std::vector<std::string> syms = src_.quantum.symbols();
    std::set<std::string> taken(syms.begin(), syms.end());
    for (const auto& s : src_.quantum.symbols()) syms.push_back(s + "*");
    syms.insert(syms.end(), {kBeg, kEnd, kHole});
    if (std::set<std::string>(syms.begin(), syms.end()).size() != syms.size()) {
      throw Error("k->2: quantum alphabet clashes with the reserved symbols ^ $ ~ and x*");
    }
    out_.quantum = Alphabet(std::move(syms));
    for (const auto& c : src_.classical.symbols()) labels_.insert(c);
    for (const char* c : {kPlain, kMarked, kBeg, kEnd, kHole}) labels_.insert(c);
  }

  Matrix projector(const std::vector<int>& idx) const {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(side()), static_cast<Eigen::Index>(side()));
    for (int i : idx) p(i, i) = 1.0;
    return p;
  }

  AdmissibleTransformation kind(bool split_blank) const {
    std::vector<int> plain, blank, marked;
    for (int i = 0; i < static_cast<int>(d_); ++i) {
      if (split_blank && src_.quantum[static_cast<std::size_t>(i)] == sym::kBlank) {
        blank.push_back(i);
      } else {
        plain.push_back(i);
      }
      marked.push_back(mark(i));
    }
    std::vector<KrausBranch> br;
    if (split_blank) br.push_back({std::string(sym::kBlank), projector(blank)});
    br.push_back({kPlain, projector(plain)});
    br.push_back({kMarked, projector(marked)});
    br.push_back({kBeg, projector({beg()})});
    br.push_back({kEnd, projector({end()})});
    br.push_back({kHole, projector({hole()})});
    return make_observable(side(), std::move(br), split_blank ? "KindB" : "Kind");
  }

  void add_fixed_transforms() {
    const Alphabet& q = out_.quantum;
    const std::string blank(sym::kBlank);
    const std::string blank_mark = blank + "*";
    Matrix tog = Matrix::Zero(static_cast<Eigen::Index>(side()), static_cast<Eigen::Index>(side()));
    for (int i = 0; i < static_cast<int>(d_); ++i) {
      tog(mark(i), i) = 1.0;
      tog(i, mark(i)) = 1.0;
    }
    for (int i : {beg(), end(), hole()}) tog(i, i) = 1.0;
    out_.add_transform("Tog", make_unitary(side(), tog, "Tog"), {0});
    out_.add_transform("Tog2", make_unitary(side(), tog, "Tog2"), {1});
    out_.add_transform("Kind", kind(false), {0});
    out_.add_transform("KindB", kind(true), {0});
    out_.add_transform("PMark", make_permutation(q, blank, blank_mark), {0});
    out_.add_transform("PBeg", make_permutation(q, blank, kBeg), {0});
    out_.add_transform("PEnd", make_permutation(q, blank, kEnd), {0});
    const auto swap = make_swap(q);
    out_.add_transform("Swap", swap, {0, 1});
    const auto ident = make_identity(side(), 1);
    out_.add_transform("Shift", compose_sequential(swap, compose_spatial(ident, kind(false))).set_name("Shift"),
                       {0, 1});
    const auto dig = compose_spatial(make_permutation(q, blank, kHole), ident);
    out_.add_transform("Dig", compose_sequential(swap, dig).set_name("Dig"), {0, 1});
    out_.add_transform("Fill", compose_sequential(dig, swap).set_name("Fill"), {0, 1});
  }

  // Acts as `t` on marked cells, identity elsewhere (folded into the first
  // branch).
  AdmissibleTransformation lift(const AdmissibleTransformation& t, const std::string& name) const {
    const std::size_t j = t.arity();
    const std::size_t n = op_side(side(), j);
    const std::size_t m = op_side(d_, j);
    std::vector<Eigen::Index> map(m);
    std::vector<bool> in_block(n, false);
    for (std::size_t g = 0; g < m; ++g) {
      std::size_t rest = g;
      std::vector<std::size_t> digits(j);
      for (std::size_t c = j; c-- > 0;) {
        digits[c] = rest % d_;
        rest /= d_;
      }
      std::size_t idx = 0;
      for (std::size_t c = 0; c < j; ++c) idx = idx * side() + d_ + digits[c];
      map[g] = static_cast<Eigen::Index>(idx);
      in_block[idx] = true;
    }
    std::vector<KrausBranch> br;
    for (const auto& b : t.branches()) {
      Matrix op = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          op(map[r], map[c]) = b.op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
      }
      if (br.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
          if (!in_block[i]) op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
      }
      br.push_back({b.outcome, std::move(op)});
    }
    return AdmissibleTransformation(name, side(), j, j, std::move(br));
  }

  void verify(const std::string& name, const AdmissibleTransformation& t,
              const std::vector<DecompositionPiece>& pieces) const {
    const std::size_t n = t.arity();
    if (pieces.empty()) throw Error("k->2: decomposition of '" + name + "' is empty");
    AdmissibleTransformation acc = make_identity(d_, n);
    for (const auto& p : pieces) {
      if (p.transform.dim() != d_ || !p.transform.arity_preserving() || p.transform.arity() > 2 ||
          p.operands.size() != p.transform.arity()) {
        throw Error("k->2: decomposition of '" + name + "' has a piece that is not a 1- or 2-cell transform");
      }
      for (std::size_t o : p.operands) {
        if (o >= n) throw Error("k->2: decomposition of '" + name + "' uses operand " + std::to_string(o + 1));
      }
      if (p.operands.size() == 2 && p.operands[0] == p.operands[1]) {
        throw Error("k->2: decomposition of '" + name + "' repeats an operand");
      }
      std::vector<KrausBranch> br;
      for (const auto& b : p.transform.branches()) {
        br.push_back({b.outcome, embed_on_cells(b.op, d_, p.operands, n)});
      }
      acc = compose_sequential(acc, AdmissibleTransformation(p.transform.name(), d_, n, n, std::move(br)));
    }
    const double gap = channel_gap(acc, t);
    if (gap > tol::kCompleteness) {
      throw Error("k->2: decomposition of '" + name + "' does not reproduce it (deviation " +
                  std::to_string(gap) + ")");
    }
  }

  void plan_pieces() {
    for (const auto& [name, pieces] : dec_) {
      if (!src_.transforms.count(name)) throw Error("k->2: decomposition for unknown transform '" + name + "'");
    }
    for (const auto& [name, bound] : src_.transforms) {
      std::vector<DecompositionPiece> pieces;
      if (auto it = dec_.find(name); it != dec_.end()) {
        verify(name, bound.transform, it->second);
        pieces = it->second;
      } else if (bound.transform.arity() > 2) {
        throw Error("k->2: transform '" + name + "' acts on " + std::to_string(bound.transform.arity()) +
                    " cells and has no decomposition");
      } else {
        std::vector<std::size_t> ops(bound.transform.arity());
        for (std::size_t i = 0; i < ops.size(); ++i) ops[i] = i;
        pieces.push_back({bound.transform, ops});
      }
      std::vector<Piece> plan;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string lifted = "L_" + name + "_" + std::to_string(i + 1);
        const auto t = lift(pieces[i].transform, lifted);
        Piece p{lifted, {}, t.outcomes()};
        for (std::size_t o : pieces[i].operands) p.tapes.push_back(bound.tapes.at(o));
        for (const auto& l : p.outcomes) labels_.insert(l);
        // Two-cell pieces see the parked operand (tape 2) first.
        out_.add_transform(lifted, t, p.tapes.size() == 1 ? std::vector<std::size_t>{0}
                                                          : std::vector<std::size_t>{1, 0});
        plan.push_back(std::move(p));
      }
      plans_[name] = std::move(plan);
    }
  }

  std::string fresh() { return "k" + std::to_string(++counter_); }

  static std::vector<Move> moves(char a, char b) { return {parse_move(a), parse_move(b)}; }

  void emit(const Cursor& at, const std::string& next, const char* mv, const std::string& t) {
    out_.add_transition(at.state, at.outcome, Transition{next, moves(mv[0], mv[1]), t});
  }

  // Walks tape 1 from segment `from` to segment `to` and stops on the cell
  // whose Kind outcome is `target`.
  Cursor navigate(const Cursor& at, std::size_t from, std::size_t to, const char* target) {
    if (from == to) return at;
    const bool right = to > from;
    const std::size_t count = right ? to - from : from - to;
    const char* mv = right ? "RS" : "LS";
    const char* boundary = right ? kBeg : kEnd;
    std::vector<std::string> walk(count);
    for (auto& w : walk) w = fresh();
    const std::string found = fresh();
    emit(at, walk[0], mv, "Kind");
    for (std::size_t c = 0; c < count; ++c) {
      for (const char* o : {kPlain, kMarked, kBeg, kEnd, kHole}) {
        const bool cross = std::string(o) == boundary;
        const std::string next = !cross ? walk[c] : (c + 1 == count ? found : walk[c + 1]);
        emit({walk[c], o}, next, mv, "Kind");
      }
    }
    emit({found, kPlain}, found, mv, "Kind");
    return {found, target};
  }

  // Shifts everything from the tape-1 head rightwards by one cell, writing
  // the tape-2 cell at the head. Ends on the terminator.
  Cursor shift_right(const Cursor& at) {
    const std::string first = fresh();
    const std::string after_end = fresh();
    emit(at, first, "SS", "Shift");
    for (const std::string& s : {first, after_end}) {
      for (const char* o : {kPlain, kMarked, kBeg, kEnd, kHole}) {
        if (s == after_end && std::string(o) == kPlain) continue;
        emit({s, o}, std::string(o) == kEnd ? after_end : first, "RS", "Shift");
      }
    }
    return {after_end, kPlain};
  }

  std::vector<Position> move_head(const Position& p, std::size_t seg, Move mv) {
    const Cursor at = navigate(p.at, p.seg, seg, kMarked);
    const std::string a = fresh();
    const std::string b = fresh();
    emit(at, a, "SS", "Tog");
    emit({a, std::string(sym::kVoid)}, b, mv == Move::kRight ? "RS" : "LS", "Kind");
    const std::string c = fresh();
    emit({b, kPlain}, c, "SS", "Tog");
    std::vector<Position> out{{{c, std::string(sym::kVoid)}, seg}};
    const std::string i = fresh();
    if (mv == Move::kRight) {
      emit({b, kEnd}, i, "SS", "Tog2");
    } else {
      emit({b, kBeg}, i, "RS", "Tog2");
    }
    out.push_back({shift_right({i, std::string(sym::kVoid)}), k_ + 1});
    return out;
  }

  struct Branch {
    Position pos;
    std::string label;
  };

  std::vector<Branch> apply_piece(const Branch& in, const Piece& piece) {
    std::vector<Branch> out;
    const std::size_t ta = piece.tapes[0] + 1;
    const Cursor at = navigate(in.pos.at, in.pos.seg, ta, kMarked);
    const std::string x = fresh();
    if (piece.tapes.size() == 1) {
      emit(at, x, "SS", piece.transform);
      for (const auto& l : piece.outcomes) out.push_back({{{x, l}, ta}, concat_outcomes(in.label, l)});
      return out;
    }
    const std::size_t tb = piece.tapes[1] + 1;
    emit(at, x, "SS", "Dig");
    const Cursor there = navigate({x, std::string(sym::kVoid)}, ta, tb, kMarked);
    const std::string y = fresh();
    emit(there, y, "SS", piece.transform);
    for (const auto& l : piece.outcomes) {
      const Cursor back = navigate({y, l}, tb, ta, kHole);
      const std::string z = fresh();
      emit(back, z, "SS", "Fill");
      out.push_back({{{z, std::string(sym::kVoid)}, ta}, concat_outcomes(in.label, l)});
    }
    return out;
  }

  static std::string entry(const std::string& q, const std::string& c, std::size_t s) {
    return q + ":" + c + ":" + std::to_string(s);
  }

  void enter(const Cursor& at, const std::string& q, const std::string& c, std::size_t s) {
    if (q == sym::kYes || q == sym::kNo) {
      emit(at, q, "SS", "-");
      return;
    }
    if (q == sym::kHalt) {
      const std::string name = "halt:" + std::to_string(s);
      emit(at, name, "SS", "-");
      if (cleaned_.insert(s).second) emit_cleanup({name, std::string(sym::kVoid)}, s);
      return;
    }
    const std::string name = entry(q, c, s);
    emit(at, name, "SS", "-");
    if (entered_.insert(name).second) pending_.emplace_back(q, c, s);
  }

  void emit_setup() {
    const std::string v(sym::kVoid);
    std::string s1 = fresh(), s2 = fresh(), s3 = fresh(), s4 = fresh();
    emit({out_.initial, std::string(sym::kBlank)}, s1, "SS", "PMark");
    emit({s1, v}, s2, "LS", "PBeg");
    emit({s2, v}, s3, "LS", "PBeg");
    emit({s3, v}, s4, "RS", "KindB");
    for (const char* o : {kBeg, kMarked, kPlain}) emit({s4, o}, s4, "RS", "KindB");
    Cursor at{s4, std::string(sym::kBlank)};
    auto write = [&](const char* mv, const char* t) {
      const std::string n = fresh();
      emit(at, n, mv, t);
      at = {n, v};
    };
    write("SS", "PEnd");
    for (std::size_t j = 2; j <= k_; ++j) {
      write("RS", "PBeg");
      write("RS", "PMark");
      write("RS", "PEnd");
    }
    write("RS", "PEnd");
    enter(at, src_.initial, std::string(sym::kBlank), k_ + 1);
  }

  void emit_transition(const std::string& q, const std::string& c, std::size_t seg) {
    const Transition* tr = src_.find_transition(q, c);
    if (tr == nullptr) return;
    std::vector<Branch> live{{{{entry(q, c, seg), std::string(sym::kVoid)}, seg}, std::string(sym::kVoid)}};
    for (std::size_t j = 0; j < k_; ++j) {
      if (tr->moves[j] == Move::kStay) continue;
      std::vector<Branch> next;
      for (const auto& b : live) {
        for (auto& p : move_head(b.pos, j + 1, tr->moves[j])) next.push_back({p, b.label});
      }
      live = std::move(next);
    }
    if (tr->transform != "-") {
      for (const auto& piece : plans_.at(tr->transform)) {
        std::vector<Branch> next;
        for (const auto& b : live) {
          for (auto& n : apply_piece(b, piece)) next.push_back(std::move(n));
        }
        live = std::move(next);
      }
    }
    for (const auto& b : live) enter(b.pos.at, tr->next, b.label, b.pos.seg);
  }

  // Un-marks segment 1 and parks every other cell of the layout on tape 2.
  void emit_cleanup(const Cursor& start, std::size_t seg) {
    const std::string v(sym::kVoid);
    const Cursor at = navigate(start, seg, 1, kMarked);
    const std::string a = fresh(), b = fresh(), c = fresh(), d = fresh(), e = fresh();
    emit(at, a, "SS", "Tog");
    emit({a, v}, b, "LS", "Kind");
    emit({b, kPlain}, b, "LS", "Kind");
    emit({b, kBeg}, c, "SS", "Swap");
    emit({c, v}, d, "LR", "Swap");
    emit({d, v}, e, "RS", "Kind");
    emit({e, kPlain}, e, "RS", "Kind");
    const std::string loop = fresh(), after_end = fresh();
    emit({e, kEnd}, loop, "SR", "Shift");
    for (const std::string& s : {loop, after_end}) {
      for (const char* o : {kPlain, kMarked, kBeg, kEnd}) {
        if (s == after_end && std::string(o) == kEnd) continue;
        emit({s, o}, std::string(o) == kEnd ? after_end : loop, "RR", "Shift");
      }
    }
    emit({after_end, kEnd}, std::string(sym::kHalt), "SS", "-");
  }

  const MachineDescription& src_;
  const Decompositions& dec_;
  MachineDescription out_;
  std::size_t d_ = 0;
  std::size_t k_ = 0;
  std::size_t counter_ = 0;
  std::set<std::string> labels_;
  std::map<std::string, std::vector<Piece>> plans_;
  std::set<std::string> entered_;
  std::set<std::size_t> cleaned_;
  std::deque<std::tuple<std::string, std::string, std::size_t>> pending_;
};

}  // namespace

MachineDescription compile_ktape_to_2tape(const MachineDescription& m, const Decompositions& decompositions) {
  return KtapeCompiler(m, decompositions).run();
}

}  // namespace cqtm
