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

#include <functional>
#include <string>

#include "scorekit/curved_function.hpp"
#include "scorekit/scoring_rule.hpp"

namespace scorekit {

/// Whether quasi-Bregman members keep the linear term that pins their
/// baseline at q. Dropping it yields an equivalent, simpler rule with the
/// same optimal score estimates but a different entropy maximizer.
enum class MemberForm { baseline_normalized, simplified };

/// A baseline-indexed family q -> s(., . || q) of strictly proper rules.
class WeightedFamily {
 public:
  using MemberFn = std::function<ScoringRule(const Distribution&)>;

  WeightedFamily(std::string name, MemberFn member) : name_(std::move(name)), member_(std::move(member)) {}

  const std::string& name() const noexcept { return name_; }

  /// The member with baseline q. Throws DomainError unless q is interior.
  ScoringRule member(const Distribution& q) const;

 private:
  std::string name_;
  MemberFn member_;
};

/// s(p,r||q) = (1 - sum p_i^b q_i^(1-b)) / b - (1 - sum r_i p_i^(b-1) q_i^(1-b)) / (b - 1), b > 1.
WeightedFamily weighted_power_family(double beta);

/// s(p,r||q) = { sum r_i (p_i/q_i)^(b-1) / (sum p_i^b q_i^(1-b))^((b-1)/b) - 1 } / (b - 1), b > 1.
WeightedFamily weighted_pseudospherical_family(double beta);

/// Members with optimal expected score
///   S(p||q) = h( sum f(q_i) g(p_i/q_i) ) - g'(1) h'(g(1) sum f(q_j)) sum p_i f(q_i)/q_i
/// on the simplex; scores follow from S by the tangent-plane construction
/// s(p, r) = S(p) + <grad S(p), r - p>, using exact derivatives of f, g, h.
///
/// Requires f > 0 on (0, 1), g strictly convex and h strictly increasing;
/// violations raise ConfigError.
WeightedFamily quasi_bregman_family(const CurvedFunction& f, const CurvedFunction& g, const CurvedFunction& h,
                                    MemberForm form = MemberForm::baseline_normalized);

/// s(p,r||q) = sum f(q_i) { g(p_i/q_i) + g'(p_i/q_i) (r_i - p_i) / q_i },
/// plus the baseline-pinning term -g'(1) sum r_i f(q_i)/q_i unless `form`
/// is simplified. Equal to the quasi-Bregman family with h = identity.
WeightedFamily bregman_weighted_family(const CurvedFunction& f, const CurvedFunction& g,
                                       MemberForm form = MemberForm::baseline_normalized);

/// member(q) = rebase(rule, q).
WeightedFamily trivial_family(const ScoringRule& rule);

/// h for the weighted power family: (x - 1) / (b (b - 1)).
CurvedFunction power_family_h(double beta);
/// h for the weighted pseudospherical family: (x^(1/b) - 1) / (b (b - 1)).
CurvedFunction pseudospherical_family_h(double beta);

}  // namespace scorekit
