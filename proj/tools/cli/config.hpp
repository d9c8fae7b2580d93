// Copyright 2026 The scorekit Authors
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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scorekit/estimation.hpp"
#include "scorekit/portfolio.hpp"
#include "scorekit/scoring_rule.hpp"
#include "scorekit/weighted_family.hpp"

namespace scorekit::cli {

using Json = nlohmann::json;

/// Thrown for malformed input files, JSON and option values (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a JSON literal when `text` starts with '{', otherwise reads and
/// parses the file it names.
Json load_json(const std::string& text);

CurvedFunction parse_curved(const Json& spec);
ScoringRule parse_rule(const Json& spec);
WeightedFamily parse_family(const Json& spec);

/// Family types, plus "bregman" when it carries an "f" field.
bool is_family_spec(const Json& spec);

/// "softmax:3" or "binomial_squares".
ParametricModel parse_model_name(const std::string& name);
/// {"name": "softmax", "m": 3} or {"name": "binomial_squares"}.
ParametricModel parse_model(const Json& spec);

OptimizerSettings parse_optimizer(const Json& spec);

/// Comma-separated reals.
Vector parse_vector(const std::string& text);

/// One 1-based outcome per line; blank lines are skipped. InputError names
/// the offending line.
std::vector<int> parse_outcomes_csv(const std::string& content, std::size_t m);
/// A single comma-separated row of nonnegative integer counts.
std::vector<long long> parse_counts_csv(const std::string& content, std::size_t m);

/// Outcome sequence with the given per-category counts (1-based labels).
std::vector<int> expand_counts(const std::vector<long long>& counts);

SimulationConfig parse_simulation(const Json& spec);

/// Seed from SCOREKIT_SEED when set, otherwise `fallback`.
std::uint64_t seed_override(std::uint64_t fallback);

/// Strict-schema validation of emitted reports; throws InputError.
void validate_score_report(const Json& j);
void validate_estimate_report(const Json& j);
void validate_compat_report(const Json& j);
void validate_portfolio_report(const Json& j);

}  // namespace scorekit::cli
