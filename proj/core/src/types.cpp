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

#include "cqtm/types.hpp"

#include <atomic>
#include <cstdlib>

namespace cqtm {

namespace {

std::size_t initial_cap() {
  if (const char* env = std::getenv("CQTM_AMPLITUDE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 22;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{initial_cap()};
  return cap;
}

}  // namespace

std::string concat_outcomes(std::string_view a, std::string_view b) {
  if (a == sym::kVoid) return std::string(b);
  if (b == sym::kVoid) return std::string(a);
  std::string out(a);
  out += '.';
  out += b;
  return out;
}

std::size_t amplitude_cap() { return cap_storage().load(); }

void set_amplitude_cap(std::size_t cap) { cap_storage().store(cap); }

std::size_t checked_pow(std::size_t d, std::size_t n, std::size_t limit) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (d != 0 && r > limit / d) return 0;
    r *= d;
  }
  return r > limit ? 0 : r;
}

}  // namespace cqtm
