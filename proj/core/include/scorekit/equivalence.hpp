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

#include <cstdint>
#include <optional>

#include "scorekit/scoring_rule.hpp"

namespace scorekit {

/// Witness of s1(p, r) = a { s2(p, r) + <b, r> } with a > 0.
struct EquivalenceWitness {
  double a = 1.0;
  Vector b;
  double max_residual = 0.0;
};

struct EquivalenceOptions {
  int probes = 20;             // random interior forecasts
  double tolerance = 1e-8;     // on the residual, relative to max(1, |s1|)
  std::uint64_t seed = 1729;
};

/// Least-squares fit of a and b over point-mass outcomes and random
/// interior forecasts. Returns nullopt when the best fit leaves a residual
/// above tolerance or has a <= 0.
std::optional<EquivalenceWitness> equivalence_fit(const ScoringRule& rule1, const ScoringRule& rule2,
                                                  std::optional<std::size_t> m = std::nullopt,
                                                  const EquivalenceOptions& opts = {});

}  // namespace scorekit
