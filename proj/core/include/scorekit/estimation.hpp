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
#include <string_view>

#include "scorekit/parametric_model.hpp"
#include "scorekit/scoring_rule.hpp"
#include "scorekit/weighted_family.hpp"

namespace scorekit {

struct OptimizerSettings {
  int max_iters = 500;
  double grad_tol = 1e-10;
  int n_starts = 5;
  std::uint64_t seed = 42;
};

enum class WellBehaved { yes, no, unknown };
std::string_view to_string(WellBehaved w);

struct EstimationResult {
  Vector theta_hat;
  Distribution p_hat = uniform(2);
  double score_at_opt = 0.0;
  double grad_norm = 0.0;  // |grad_theta s(p(theta), r)| at theta_hat, box-projected
  WellBehaved well_behaved = WellBehaved::unknown;
  bool restarts_agree = false;
  bool at_boundary = false;
  int iterations = 0;           // of the selected start
  int converged_starts = 0;
  std::vector<Vector> starts;   // start points, in draw order
};

/// grad_theta s(p(theta), r) = J(theta)^T grad_p s(p(theta), r).
Vector score_gradient_theta(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                            std::span<const double> theta);

/// argmax over the model's parameter box of s(p(theta), r): gradient ascent
/// with Armijo backtracking (c = 1e-4, shrink 0.5) from `n_starts` seeded
/// uniform starts. The gradient is preconditioned by the model metric J^T J,
/// which keeps saturated softmax corners from stalling the ascent.
///
/// Well-behavedness is assessed by multistart agreement (1e-6), interior
/// location and a negative-definite finite-difference theta-Hessian.
/// Steps leaving the box are clipped to it; a start that stops against the
/// box with an outward gradient counts as converged there, and the result
/// is flagged at_boundary with well_behaved = no.
/// Throws NumericError when no start reaches `grad_tol`.
EstimationResult optimize_score(const ScoringRule& rule, const ParametricModel& model, const Distribution& r,
                                const OptimizerSettings& opts = {});

/// Maximum likelihood: optimize_score with the log rule.
EstimationResult mle(const ParametricModel& model, const Distribution& r, const OptimizerSettings& opts = {});

/// Gradient-norm threshold for a passing stationarity transfer.
inline constexpr double kTransferTolerance = 1e-6;

struct TransferReport {
  std::optional<bool> passed;  // empty when the base estimate is not well behaved
  EstimationResult base;
  Distribution member_baseline = uniform(2);
  double member_grad_norm = 0.0;
};

/// Fits theta0 under `rule`, builds the family member with baseline
/// p(theta0) and measures the member's theta-gradient at theta0.
TransferReport transfer_check(const WeightedFamily& family, const ScoringRule& rule, const ParametricModel& model,
                              const Distribution& r, const OptimizerSettings& opts = {});

/// A one-parameter path through q on which the rule is stationary at
/// theta = 0 while the family member with baseline q is not.
struct CounterexamplePath {
  ParametricModel model;
  Vector v;  // member gradient at q
  Vector w;  // rule gradient at q
  Vector b;  // v - (<v,w>/<w,w>) w
  double deviation = 0.0;
};

/// Returns nullopt when v and w are parallel within `tol` (deviation
/// 1 - cos^2). Throws DomainError for m < 3 or boundary inputs and
/// NumericError when either gradient vanishes.
std::optional<CounterexamplePath> counterexample_path(const WeightedFamily& family, const ScoringRule& rule,
                                                      const Distribution& q, const Distribution& r,
                                                      double tol = 1e-8);

}  // namespace scorekit
