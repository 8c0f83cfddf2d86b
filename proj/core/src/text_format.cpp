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


#include "cqtm/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace cqtm {

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
};

bool is_special(char c) { return c == '{' || c == '}' || c == '[' || c == ']' || c == ',' || c == '='; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_special(c)) {
      out.push_back({std::string(1, c), line});
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             !is_special(text[j]) && text[j] != '%') {
        ++j;
      }
      out.push_back({std::string(text.substr(i, j - i)), line});
      i = j;
    }
  }
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : t_(std::move(tokens)) {}

  bool done() const { return i_ >= t_.size(); }
  const Token& peek() const {
    if (done()) throw ParseError(last_line(), "unexpected end of input");
    return t_[i_];
  }
  Token next() {
    const Token& t = peek();
    ++i_;
    return t;
  }
  void expect(std::string_view s) {
    const Token t = next();
    if (t.text != s) throw ParseError(t.line, "expected '" + std::string(s) + "', found '" + t.text + "'");
  }
  bool accept(std::string_view s) {
    if (!done() && t_[i_].text == s) {
      ++i_;
      return true;
    }
    return false;
  }
  bool on_line(std::size_t line) const { return !done() && t_[i_].line == line; }
  std::vector<Token> rest_of_line(std::size_t line) {
    std::vector<Token> out;
    while (on_line(line)) out.push_back(next());
    return out;
  }
  std::size_t last_line() const { return t_.empty() ? 0 : t_.back().line; }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

std::size_t parse_size(const Token& t) {
  std::size_t v = 0;
  const auto* b = t.text.data();
  const auto* e = b + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(t.line, "expected a non-negative integer, found '" + t.text + "'");
  return v;
}

double parse_double(const Token& t) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(t.text, &pos);
    if (pos != t.text.size()) throw std::invalid_argument(t.text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(t.line, "expected a number, found '" + t.text + "'");
  }
}

Complex parse_complex_at(const Token& t) {
  try {
    return parse_complex(t.text);
  } catch (const Error& e) {
    throw ParseError(t.line, e.what());
  }
}

Matrix parse_matrix_block(Cursor& c, std::size_t line) {
  c.expect("{");
  std::vector<Complex> entries;
  while (c.peek().text != "}") entries.push_back(parse_complex_at(c.next()));
  c.expect("}");
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  if (side == 0 || side * side != entries.size()) {
    throw ParseError(line, "matrix block has " + std::to_string(entries.size()) + " entries, not a square");
  }
  Matrix m(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t k = 0; k < side; ++k) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = entries[r * side + k];
    }
  }
  return m;
}

std::vector<KrausBranch> parse_branch_blocks(Cursor& c, std::string_view keyword) {
  c.expect("{");
  std::vector<KrausBranch> br;
  while (!c.accept("}")) {
    const Token kw = c.next();
    if (kw.text != keyword) {
      throw ParseError(kw.line, "expected '" + std::string(keyword) + "', found '" + kw.text + "'");
    }
    const Token label = c.next();
    br.push_back({label.text, parse_matrix_block(c, label.line)});
  }
  return br;
}

// Parses a transform definition after "=". `lookup` resolves names in
// composites.
template <typename Lookup>
AdmissibleTransformation parse_transform_def(Cursor& c, const Alphabet& q, const std::string& name,
                                             Lookup lookup) {
  const Token kind = c.next();
  const std::size_t d = q.size();
  try {
    if (kind.text == "std") return make_std(q);
    if (kind.text == "test") return make_blank_test(q, c.next().text);
    if (kind.text == "perm") {
      const std::string a = c.next().text;
      return make_permutation(q, a, c.next().text);
    }
    if (kind.text == "swap") return make_swap(q);
    if (kind.text == "diag") {
      const std::string a = c.next().text;
      return make_diagonal(q, a, c.next().text);
    }
    if (kind.text == "identity") {
      std::size_t k = 1;
      if (c.on_line(kind.line) && c.peek().text != "@") k = parse_size(c.next());
      auto t = make_identity(d, k);
      t.set_definition(k == 1 ? "identity" : "identity " + std::to_string(k));
      return t;
    }
    if (kind.text == "unitary") return make_unitary(d, parse_matrix_block(c, kind.line), name);
    if (kind.text == "observable") return make_observable(d, parse_branch_blocks(c, "proj"), name);
    if (kind.text == "kraus") {
      auto br = parse_branch_blocks(c, "branch");
      if (br.empty()) throw Error("kraus block has no branches");
      const auto k = log_dim(d, static_cast<std::size_t>(br.front().op.cols()));
      if (!k) throw Error("kraus operator side is not a power of " + std::to_string(d));
      return AdmissibleTransformation(name, d, *k, *k, std::move(br));
    }
    if (kind.text == "[") {
      std::vector<std::string> parts;
      do {
        parts.push_back(c.next().text);
      } while (c.accept(","));
      c.expect("]");
      AdmissibleTransformation t = lookup(parts.front());
      std::string def = "[" + parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) {
        t = compose_spatial(t, lookup(parts[i]));
        def += "," + parts[i];
      }
      t.set_definition(def + "]");
      return t;
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(kind.line, "transform '" + name + "': " + e.what());
  }
  throw ParseError(kind.line, "unknown transform kind '" + kind.text + "'");
}

std::vector<std::string> symbols_of(const std::vector<Token>& tokens) {
  std::vector<std::string> s;
  for (const auto& t : tokens) s.push_back(t.text);
  return s;
}

std::string matrix_block(const Matrix& m, const std::string& indent) {
  std::string out = "{\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += indent + "  ";
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k > 0) out += ' ';
      out += format_complex(m(r, k));
    }
    out += '\n';
  }
  out += indent + "}";
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string render_definition(const AdmissibleTransformation& t) {
  const auto& def = t.definition();
  if (def == "-") return "identity";
  if (!def.empty()) return def;
  if (t.form() == TransformForm::kUnitary && t.is_deterministic() &&
      t.branches().front().outcome == sym::kVoid) {
    return "unitary " + matrix_block(t.branches().front().op, "");
  }
  const bool obs = t.form() == TransformForm::kObservable;
  std::string out = obs ? "observable {\n" : "kraus {\n";
  for (const auto& b : t.branches()) {
    out += std::string("  ") + (obs ? "proj " : "branch ") + b.outcome + " " + matrix_block(b.op, "  ") + "\n";
  }
  return out + "}";
}

std::vector<std::string> composite_parts(const std::string& def) {
  std::vector<std::string> parts;
  if (def.size() < 2 || def.front() != '[') return parts;
  std::string cur;
  for (std::size_t i = 1; i + 1 < def.size(); ++i) {
    if (def[i] == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += def[i];
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '(' && ch != ')') s += ch;
  }
  if (s.empty()) throw Error("empty complex literal");
  auto real_of = [&](const std::string& part, bool imaginary) -> double {
    if (imaginary && (part.empty() || part == "+")) return 1.0;
    if (imaginary && part == "-") return -1.0;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &pos);
    } catch (const std::exception&) {
      throw Error("bad complex literal '" + std::string(text) + "'");
    }
    if (pos != part.size()) throw Error("bad complex literal '" + std::string(text) + "'");
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') return {real_of(s, false), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, real_of(s, true)};
  return {real_of(s.substr(0, split), false), real_of(s.substr(split), true)};
}

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string out = format_real(re);
  out += im < 0 ? "-" : "+";
  out += format_real(std::abs(im)) + "i";
  return out;
}

MachineDescription parse_machine(std::string_view text) {
  Cursor c(tokenize(text));
  MachineDescription m;
  bool header = false;
  while (!c.done()) {
    const Token kw = c.next();
    if (kw.text == "machine") {
      header = true;
      m.name = c.next().text;
      while (c.on_line(kw.line)) {
        const Token key = c.next();
        c.expect("=");
        const Token val = c.next();
        if (key.text == "kind") {
          if (val.text == "cqtm") {
            m.kind = MachineKind::kCqtm;
          } else if (val.text == "mqtm") {
            m.kind = MachineKind::kMqtm;
          } else {
            throw ParseError(val.line, "unknown machine kind '" + val.text + "'");
          }
        } else if (key.text == "tapes") {
          m.tape_count = parse_size(val);
          if (m.tape_count == 0) throw ParseError(val.line, "tape count must be positive");
        } else {
          throw ParseError(key.line, "unknown header field '" + key.text + "'");
        }
      }
    } else if (!header) {
      throw ParseError(kw.line, "expected 'machine' header, found '" + kw.text + "'");
    } else if (kw.text == "initial") {
      m.initial = c.next().text;
    } else if (kw.text == "qalphabet") {
      m.quantum = Alphabet(symbols_of(c.rest_of_line(kw.line)));
    } else if (kw.text == "calphabet") {
      m.classical = Alphabet(symbols_of(c.rest_of_line(kw.line)));
    } else if (kw.text == "transform") {
      if (m.quantum.size() == 0) throw ParseError(kw.line, "transform before qalphabet");
      const Token name = c.next();
      c.expect("=");
      auto lookup = [&](const std::string& n) -> AdmissibleTransformation {
        if (n == "-") return make_identity(m.quantum.size(), 1);
        auto it = m.transforms.find(n);
        if (it == m.transforms.end()) throw ParseError(name.line, "unknown transform '" + n + "'");
        return it->second.transform;
      };
      AdmissibleTransformation t = parse_transform_def(c, m.quantum, name.text, lookup);
      std::vector<std::size_t> tapes;
      if (c.accept("@")) {
        for (const auto& tok : c.rest_of_line(c.peek().line)) {
          const std::size_t tape = parse_size(tok);
          if (tape == 0) throw ParseError(tok.line, "tapes are numbered from 1");
          tapes.push_back(tape - 1);
        }
      }
      if (name.text == "-") throw ParseError(name.line, "'-' is reserved for the identity");
      m.add_transform(name.text, std::move(t), std::move(tapes));
    } else if (kw.text == "delta") {
      const Token q = c.next();
      const Token tau = c.next();
      c.expect("->");
      Transition tr;
      tr.next = c.next().text;
      const Token dirs = c.next();
      if (dirs.text.size() != m.tape_count) {
        throw ParseError(dirs.line, "direction arity " + std::to_string(dirs.text.size()) +
                                        " != tapes " + std::to_string(m.tape_count));
      }
      for (char ch : dirs.text) {
        try {
          tr.moves.push_back(parse_move(ch));
        } catch (const Error& e) {
          throw ParseError(dirs.line, e.what());
        }
      }
      tr.transform = c.next().text;
      if (m.delta.count({q.text, tau.text})) {
        throw ParseError(q.line, "duplicate transition for (" + q.text + ", " + tau.text + ")");
      }
      m.add_transition(q.text, tau.text, std::move(tr));
    } else {
      throw ParseError(kw.line, "unknown statement '" + kw.text + "'");
    }
  }
  if (!header) throw ParseError(0, "missing 'machine' header");
  return m;
}

std::string render_machine(const MachineDescription& m) {
  std::ostringstream os;
  os << "machine " << m.name << " kind=" << (m.kind == MachineKind::kMqtm ? "mqtm" : "cqtm")
     << " tapes=" << m.tape_count << "\n";
  os << "initial " << m.initial << "\n";
  os << "qalphabet " << join(m.quantum.symbols(), " ") << "\n";
  os << "calphabet " << join(m.classical.symbols(), " ") << "\n";
  std::set<std::string> emitted;
  std::vector<std::string> pending;
  for (const auto& [name, b] : m.transforms) pending.push_back(name);
  auto ready = [&](const std::string& name) {
    for (const auto& p : composite_parts(m.transforms.at(name).transform.definition())) {
      if (p != "-" && !emitted.count(p)) return false;
    }
    return true;
  };
  while (!pending.empty()) {
    auto it = std::find_if(pending.begin(), pending.end(), ready);
    if (it == pending.end()) it = pending.begin();
    const auto& b = m.transforms.at(*it);
    os << "transform " << *it << " = " << render_definition(b.transform);
    std::vector<std::size_t> dflt(b.transform.arity());
    for (std::size_t i = 0; i < dflt.size(); ++i) dflt[i] = i;
    if (b.tapes != dflt) {
      os << " @";
      for (auto t : b.tapes) os << ' ' << t + 1;
    }
    os << "\n";
    emitted.insert(*it);
    pending.erase(it);
  }
  for (const auto& [key, t] : m.delta) {
    os << "delta " << key.first << ' ' << key.second << " -> " << t.next << ' ';
    for (auto mv : t.moves) os << (mv == Move::kStay ? 'S' : move_char(mv));
    os << ' ' << t.transform << "\n";
  }
  return os.str();
}

StateVector parse_state(std::string_view text, const Alphabet& alphabet, bool renorm) {
  std::string clean;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) clean += '\n';
    } else {
      clean += text[i];
    }
  }
  static const std::regex ket(R"(\|([^|>]*)>)");
  std::vector<std::pair<std::vector<int>, Complex>> terms;
  std::size_t prev = 0;
  std::size_t cells = 0;
  bool first = true;
  auto split_word = [&](std::string w) {
    std::vector<int> digits;
    while (!w.empty() && std::isspace(static_cast<unsigned char>(w.back()))) w.pop_back();
    std::size_t i = 0;
    while (i < w.size() && std::isspace(static_cast<unsigned char>(w[i]))) ++i;
    w = w.substr(i);
    if (w.find(' ') != std::string::npos) {
      std::istringstream is(w);
      std::string s;
      while (is >> s) digits.push_back(alphabet.index(s));
      return digits;
    }
    std::size_t pos = 0;
    while (pos < w.size()) {
      std::size_t best = 0;
      int idx = -1;
      for (std::size_t k = 0; k < alphabet.size(); ++k) {
        const auto& s = alphabet[k];
        if (s.size() > best && w.compare(pos, s.size(), s) == 0) {
          best = s.size();
          idx = static_cast<int>(k);
        }
      }
      if (idx < 0) throw Error("unknown symbol at '" + w.substr(pos) + "'");
      digits.push_back(idx);
      pos += best;
    }
    return digits;
  };
  for (auto it = std::sregex_iterator(clean.begin(), clean.end(), ket); it != std::sregex_iterator(); ++it) {
    const auto& mt = *it;
    std::string coeff = clean.substr(prev, static_cast<std::size_t>(mt.position()) - prev);
    prev = static_cast<std::size_t>(mt.position() + mt.length());
    std::string c;
    for (char ch : coeff) {
      if (!std::isspace(static_cast<unsigned char>(ch))) c += ch;
    }
    if (!first && (c.empty() || (c[0] != '+' && c[0] != '-'))) {
      throw ParseError(0, "state terms must be separated by '+' or '-'");
    }
    if (!c.empty() && c[0] == '+') c.erase(0, 1);
    Complex z{1.0, 0.0};
    if (c == "-") {
      z = -1.0;
    } else if (!c.empty()) {
      z = parse_complex(c);
    }
    std::vector<int> digits;
    try {
      digits = split_word(mt[1].str());
    } catch (const Error& e) {
      throw ParseError(0, std::string("state word: ") + e.what());
    }
    if (first) cells = digits.size();
    if (digits.size() != cells) throw ParseError(0, "state words have different lengths");
    terms.emplace_back(std::move(digits), z);
    first = false;
  }
  for (std::size_t i = prev; i < clean.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(clean[i]))) throw ParseError(0, "trailing text after last term");
  }
  if (terms.empty()) throw ParseError(0, "state has no terms");
  const std::size_t d = alphabet.size();
  const std::size_t size = checked_pow(d, cells, amplitude_cap());
  if (size == 0) throw Error("state exceeds the amplitude cap");
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(size));
  for (const auto& [digits, z] : terms) {
    std::size_t idx = 0;
    for (int dgt : digits) idx = idx * d + static_cast<std::size_t>(dgt);
    amps[static_cast<Eigen::Index>(idx)] += z;
  }
  const double n2 = amps.squaredNorm();
  if (!(n2 > 0)) throw ParseError(0, "state has zero norm");
  if (!renorm && std::abs(n2 - 1.0) > 1e-6) {
    throw ParseError(0, "state norm^2 " + format_real(n2) + " deviates from 1 (use --renorm)");
  }
  return StateVector(d, cells, amps / std::sqrt(n2), 1e-6);
}

std::string render_state(const StateVector& s, const Alphabet& alphabet) {
  bool spaced = false;
  for (const auto& sy : alphabet.symbols()) spaced = spaced || sy.size() != 1;
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) < 1e-15) continue;
    std::string word;
    for (std::size_t c = 0; c < s.cells(); ++c) {
      if (spaced && c > 0) word += ' ';
      word += alphabet[static_cast<std::size_t>(s.digit(i, c))];
    }
    out += (out.empty() ? "" : "+ ") + format_complex(s[i]) + "|" + word + ">\n";
  }
  if (out.empty()) out = "1+0i|>\n";
  return out;
}

ClassicalTM parse_tm(std::string_view text) {
  Cursor c(tokenize(text));
  ClassicalTM tm;
  bool header = false;
  while (!c.done()) {
    const Token kw = c.next();
    if (kw.text == "tm") {
      header = true;
      tm.name = c.next().text;
    } else if (!header) {
      throw ParseError(kw.line, "expected 'tm' header");
    } else if (kw.text == "initial") {
      tm.initial = c.next().text;
    } else if (kw.text == "alphabet") {
      tm.alphabet = symbols_of(c.rest_of_line(kw.line));
    } else if (kw.text == "delta") {
      const Token q = c.next();
      const Token a = c.next();
      c.expect("->");
      ClassicalTM::Action act;
      act.next = c.next().text;
      act.write = c.next().text;
      const Token d = c.next();
      if (d.text.size() != 1) throw ParseError(d.line, "expected one move, found '" + d.text + "'");
      try {
        act.move = parse_move(d.text[0]);
      } catch (const Error& e) {
        throw ParseError(d.line, e.what());
      }
      if (tm.delta.count({q.text, a.text})) throw ParseError(q.line, "duplicate transition");
      tm.delta[{q.text, a.text}] = act;
    } else {
      throw ParseError(kw.line, "unknown statement '" + kw.text + "'");
    }
  }
  if (!header) throw ParseError(0, "missing 'tm' header");
  validate_tm(tm);
  return tm;
}

std::string render_tm(const ClassicalTM& tm) {
  std::ostringstream os;
  os << "tm " << tm.name << "\ninitial " << tm.initial << "\nalphabet " << join(tm.alphabet, " ") << "\n";
  for (const auto& [key, a] : tm.delta) {
    os << "delta " << key.first << ' ' << key.second << " -> " << a.next << ' ' << a.write << ' '
       << (a.move == Move::kStay ? 'S' : move_char(a.move)) << "\n";
  }
  return os.str();
}

CircuitDescription parse_circuit(std::string_view text) {
  Cursor c(tokenize(text));
  CircuitDescription circ;
  bool header = false;
  while (!c.done()) {
    const Token kw = c.next();
    if (kw.text == "circuit") {
      header = true;
      const Token key = c.next();
      if (key.text != "n") throw ParseError(key.line, "expected 'n=<qubits>'");
      c.expect("=");
      circ.qubits = parse_size(c.next());
    } else if (!header) {
      throw ParseError(kw.line, "expected 'circuit' header");
    } else if (kw.text == "defgate") {
      const Token name = c.next();
      circ.custom[name.text] = parse_matrix_block(c, name.line);
    } else if (kw.text == "gate") {
      Gate g;
      g.name = c.next().text;
      for (const auto& t : c.rest_of_line(kw.line)) g.qubits.push_back(parse_size(t));
      if (g.qubits.empty()) throw ParseError(kw.line, "gate without qubits");
      circ.gates.push_back(std::move(g));
    } else {
      throw ParseError(kw.line, "unknown statement '" + kw.text + "'");
    }
  }
  if (!header) throw ParseError(0, "missing 'circuit' header");
  try {
    validate_circuit(circ);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  return circ;
}

std::string render_circuit(const CircuitDescription& c) {
  std::ostringstream os;
  os << "circuit n=" << c.qubits << "\n";
  for (const auto& [name, m] : c.custom) os << "defgate " << name << " " << matrix_block(m, "") << "\n";
  for (const auto& g : c.gates) {
    os << "gate " << g.name;
    for (auto q : g.qubits) os << ' ' << q;
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::size_t> parse_set(Cursor& c) {
  c.expect("=");
  c.expect("{");
  std::vector<std::size_t> out;
  if (c.accept("}")) return out;
  do {
    out.push_back(parse_size(c.next()));
  } while (c.accept(","));
  c.expect("}");
  return out;
}

std::string render_set(const std::vector<std::size_t>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "}";
}

std::vector<std::size_t> parse_signals(const Token& t) {
  std::vector<std::size_t> out;
  if (t.text == "0") return out;
  std::size_t i = 0;
  while (i < t.text.size()) {
    if (t.text[i] != 's') throw ParseError(t.line, "bad signal expression '" + t.text + "'");
    std::size_t j = i + 1;
    while (j < t.text.size() && std::isdigit(static_cast<unsigned char>(t.text[j]))) ++j;
    if (j == i + 1) throw ParseError(t.line, "bad signal expression '" + t.text + "'");
    out.push_back(std::stoul(t.text.substr(i + 1, j - i - 1)));
    if (j < t.text.size() && t.text[j] != '^' && t.text[j] != '+') {
      throw ParseError(t.line, "bad signal expression '" + t.text + "'");
    }
    i = j + 1;
  }
  return out;
}

}  // namespace

PatternDescription parse_pattern(std::string_view text) {
  Cursor c(tokenize(text));
  PatternDescription p;
  bool header = false;
  while (!c.done()) {
    const Token kw = c.next();
    if (kw.text == "pattern") {
      header = true;
      while (c.on_line(kw.line)) {
        const Token key = c.next();
        if (key.text == "V") {
          p.vertices = parse_set(c);
        } else if (key.text == "I") {
          p.inputs = parse_set(c);
        } else if (key.text == "O") {
          p.outputs = parse_set(c);
        } else {
          throw ParseError(key.line, "unknown pattern field '" + key.text + "'");
        }
      }
    } else if (!header) {
      throw ParseError(kw.line, "expected 'pattern' header");
    } else {
      PatternCommand cmd;
      if (kw.text == "E") {
        cmd.op = PatternOp::kEntangle;
        cmd.a = parse_size(c.next());
        cmd.b = parse_size(c.next());
      } else if (kw.text == "M") {
        cmd.op = PatternOp::kMeasure;
        cmd.a = parse_size(c.next());
        cmd.angle = c.on_line(kw.line) ? parse_double(c.next()) : 0.0;
      } else if (kw.text == "X" || kw.text == "Z") {
        cmd.op = kw.text == "X" ? PatternOp::kCorrectX : PatternOp::kCorrectZ;
        cmd.a = parse_size(c.next());
        cmd.signals = parse_signals(c.next());
      } else {
        throw ParseError(kw.line, "unknown pattern command '" + kw.text + "'");
      }
      p.commands.push_back(std::move(cmd));
    }
  }
  if (!header) throw ParseError(0, "missing 'pattern' header");
  try {
    validate_pattern(p);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  return p;
}

std::string render_pattern(const PatternDescription& p) {
  std::ostringstream os;
  os << "pattern V=" << render_set(p.vertices) << " I=" << render_set(p.inputs)
     << " O=" << render_set(p.outputs) << "\n";
  for (const auto& cmd : p.commands) {
    switch (cmd.op) {
      case PatternOp::kEntangle:
        os << "E " << cmd.a << ' ' << cmd.b << "\n";
        break;
      case PatternOp::kMeasure:
        os << "M " << cmd.a << ' ' << format_real(cmd.angle) << "\n";
        break;
      case PatternOp::kCorrectX:
      case PatternOp::kCorrectZ: {
        os << (cmd.op == PatternOp::kCorrectX ? "X " : "Z ") << cmd.a << ' ';
        if (cmd.signals.empty()) os << '0';
        for (std::size_t i = 0; i < cmd.signals.size(); ++i) os << (i ? "^" : "") << 's' << cmd.signals[i];
        os << "\n";
        break;
      }
    }
  }
  return os.str();
}

Decompositions parse_decompositions(std::string_view text, const MachineDescription& m) {
  Cursor c(tokenize(text));
  std::map<std::string, AdmissibleTransformation> local;
  Decompositions out;
  std::string current;
  auto lookup = [&](const std::string& n, std::size_t line) -> AdmissibleTransformation {
    if (n == "-") return make_identity(m.quantum.size(), 1);
    if (auto it = local.find(n); it != local.end()) return it->second;
    if (auto it = m.transforms.find(n); it != m.transforms.end()) return it->second.transform;
    throw ParseError(line, "unknown transform '" + n + "'");
  };
  while (!c.done()) {
    const Token kw = c.next();
    if (kw.text == "transform") {
      const Token name = c.next();
      c.expect("=");
      auto t = parse_transform_def(c, m.quantum, name.text,
                                   [&](const std::string& n) { return lookup(n, name.line); });
      t.set_name(name.text);
      local[name.text] = std::move(t);
    } else if (kw.text == "decomp") {
      current = c.next().text;
      out[current];
    } else if (kw.text == "piece") {
      if (current.empty()) throw ParseError(kw.line, "piece outside a decomp block");
      const Token name = c.next();
      DecompositionPiece piece{lookup(name.text, name.line), {}};
      for (const auto& t : c.rest_of_line(kw.line)) {
        const std::size_t k = parse_size(t);
        if (k == 0) throw ParseError(t.line, "operands are numbered from 1");
        piece.operands.push_back(k - 1);
      }
      if (piece.operands.empty()) {
        for (std::size_t i = 0; i < piece.transform.arity(); ++i) piece.operands.push_back(i);
      }
      if (piece.operands.size() != piece.transform.arity()) {
        throw ParseError(kw.line, "piece '" + name.text + "' has arity " +
                                      std::to_string(piece.transform.arity()) + " but " +
                                      std::to_string(piece.operands.size()) + " operands");
      }
      out[current].push_back(std::move(piece));
    } else {
      throw ParseError(kw.line, "unknown statement '" + kw.text + "'");
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace cqtm
