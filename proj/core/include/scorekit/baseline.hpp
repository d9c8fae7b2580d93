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

struct BaselineOptions {
  double grad_tol = 1e-10;
  int max_iters = 500;
  int restarts = 3;
  std::uint64_t seed = 20120919;
};

struct BaselineResult {
  Distribution point;
  double grad_norm = 0.0;  // norm of the tangent gradient of S at `point`
  int iterations = 0;      // summed over restarts
};

/// Minimizes the optimal expected score S over the open simplex by mirror
/// descent (multiplicative updates) with backtracking.
///
/// `m` is required for rules without a fixed dimension. Throws DomainError
/// when iterates approach the boundary (no interior minimum) and
/// NumericError when no restart reaches a tangent gradient norm of 1e-8.
BaselineResult find_baseline(const ScoringRule& rule, std::optional<std::size_t> m = std::nullopt,
                             const BaselineOptions& opts = {});

/// The unique interior maximizer of the generalized entropy -S.
Distribution baseline(const ScoringRule& rule, std::optional<std::size_t> m = std::nullopt,
                      const BaselineOptions& opts = {});

}  // namespace scorekit
