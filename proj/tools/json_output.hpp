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

#include <json.hpp>

#include "cqtm/analysis.hpp"
#include "cqtm/execution.hpp"
#include "cqtm/state_vector.hpp"

namespace cqtm::cli {

using Json = nlohmann::ordered_json;

/// Verdict name as printed by the CLI ("Accept", "Output", ...).
std::string display_name(VerdictKind k);

Json state_json(const StateVector& s, const Alphabet& alphabet);
Json verdict_json(const Verdict& v, const Alphabet& alphabet);
Json run_json(const SampledRun& run, const Alphabet& alphabet, std::uint64_t seed);
Json distribution_json(const BranchDistribution& d, const Alphabet& alphabet);
Json statistics_json(const SampleStatistics& s, const Alphabet& alphabet);
Json report_json(const EquivalenceReport& r);
Json audit_json(const AuditResult& a);

/// Adds "format" and "version" keys in front of `body`.
Json envelope(const std::string& command, const Json& body);

}  // namespace cqtm::cli
