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

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scorekit/curved_function.hpp"
#include "scorekit/scoring_rule.hpp"
#include "scorekit/weighted_family.hpp"

namespace scorekit {

/// Default parallelism tolerance with analytic gradients.
inline constexpr double kCompatTolerance = 1e-8;
/// Tolerance when either side relies on finite differences.
inline constexpr double kCompatToleranceFd = 1e-5;
/// Outcome probes closer than this (sup norm) to the baseline are skipped:
/// both gradients vanish there.
inline constexpr double kProbeSeparation = 1e-3;

enum class Verdict { compatible, incompatible, degenerate };
std::string_view to_string(Verdict v);

/// One (q, r) probe: v is the member gradient at its baseline, w the rule
/// gradient at the same point.
struct CompatProbe {
  std::size_t q_index = 0;
  std::size_t r_index = 0;
  double deviation = 0.0;  // 1 - <v,w>^2 / (<v,v><w,w>)
  double factor = 0.0;     // <v,w> / <v,v>
};

struct CompatReport {
  double parallel_deviation = 0.0;   // max over probes
  std::vector<CompatProbe> probes;   // in (q, r) order; skipped pairs omitted
  std::vector<double> a_of_q;        // median factor per q
  std::vector<double> spread_of_q;   // max |factor - a(q)| / a(q) per q
  double factor_spread = 0.0;        // max over q
  bool degenerate_dimension = false;
  Verdict verdict = Verdict::incompatible;
  double tolerance = kCompatTolerance;
  std::vector<Distribution> qs;
  std::vector<Distribution> rs;
};

/// Tests whether grad_p s(p, r) at p = q is a positive multiple a(q) of the
/// member gradient grad_p s(p, r || q) at p = q, uniformly in r.
///
/// With two outcomes the tangent space is one-dimensional, so the verdict is
/// always `degenerate`. Throws DomainError for boundary probes or when every
/// r lies within kProbeSeparation of its q.
CompatReport check_compatibility(const WeightedFamily& family, const ScoringRule& rule,
                                 const std::vector<Distribution>& qs, const std::vector<Distribution>& rs,
                                 double tol = kCompatTolerance);

/// h'(g(1)) g'(1). For f = identity quasi-Bregman families and the log rule
/// this agrees with the measured factor only when g'(1) g''(1) h'(g(1))^2 = 1
/// (for example the weighted power family at beta = 2).
double first_derivative_factor(const CurvedFunction& g, const CurvedFunction& h);

/// The factor a with grad s_log = a grad s(. || q) at p = q for the
/// quasi-Bregman family with f = identity: 1 / (h'(g(1)) g''(1)).
double log_compatibility_factor(const CurvedFunction& g, const CurvedFunction& h);

/// The weight x -> x^2 g''(x) under which Bregman weighted families are
/// compatible with the unweighted Bregman rule of g. ConfigError when the
/// result is not positive on (0, 1) or has no registry representation.
CurvedFunction bregman_compatible_weight(const CurvedFunction& g);

/// Hessian of the rule's optimal expected score at interior q, restricted to
/// the orthonormal tangent basis of tangent_basis(m); central differences
/// (step `step`) of the analytic expected-score gradient.
Eigen::MatrixXd hessian_restricted(const ScoringRule& rule, const Distribution& q, double step = 1e-5);

}  // namespace scorekit
