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
#include <string>
#include <string_view>

#include "cqtm/machine.hpp"
#include "cqtm/models.hpp"
#include "cqtm/state_vector.hpp"

namespace cqtm {

/// Syntax error with a 1-based line number (0 when not positioned).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr int kFormatVersion = 1;

MachineDescription parse_machine(std::string_view text);
std::string render_machine(const MachineDescription& m);

/// Terms `coeff|word>`; words are split on spaces when present, otherwise by
/// longest symbol match. Without `renorm` the norm must be 1 within 1e-6.
StateVector parse_state(std::string_view text, const Alphabet& alphabet, bool renorm = false);
std::string render_state(const StateVector& s, const Alphabet& alphabet);

ClassicalTM parse_tm(std::string_view text);
std::string render_tm(const ClassicalTM& tm);

CircuitDescription parse_circuit(std::string_view text);
std::string render_circuit(const CircuitDescription& c);

PatternDescription parse_pattern(std::string_view text);
std::string render_pattern(const PatternDescription& p);

/// `transform` lines as in machine files plus `decomp <name>` blocks of
/// `piece <transform> <operand>...` lines (operands 1-based). Transforms of
/// `m` may be referenced by name.
Decompositions parse_decompositions(std::string_view text, const MachineDescription& m);

Complex parse_complex(std::string_view text);
/// `a+bi` with 17 significant digits.
std::string format_complex(Complex z);
std::string format_real(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace cqtm
