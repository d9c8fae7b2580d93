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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scorekit/curved_function.hpp"
#include "scorekit/simplex.hpp"

namespace scorekit {

/// A score that is either a finite real or minus infinity.
///
/// Minus infinity arises when a rule with log or ratio terms is evaluated at
/// a forecast assigning zero probability to an outcome that occurred. It is
/// carried explicitly instead of as a raw floating-point -inf.
class ScoreValue {
 public:
  static ScoreValue finite(double v) { return ScoreValue(v); }
  static ScoreValue negative_infinity() { return ScoreValue(); }

  bool is_finite() const noexcept { return value_.has_value(); }
  /// Throws DomainError for minus infinity.
  double value() const;
  double value_or(double fallback) const noexcept { return value_.value_or(fallback); }

  friend bool operator==(const ScoreValue&, const ScoreValue&) = default;
  /// Minus infinity orders below every finite score.
  friend bool operator<(const ScoreValue& a, const ScoreValue& b) {
    if (!b.is_finite()) return false;
    if (!a.is_finite()) return true;
    return *a.value_ < *b.value_;
  }

 private:
  ScoreValue() = default;
  explicit ScoreValue(double v) : value_(v) {}
  std::optional<double> value_;
};

/// Which arguments may sit on the boundary of the simplex.
struct DomainFlags {
  bool forecast_boundary_ok = true;
  bool outcome_boundary_ok = true;
};

/// Implementation interface behind ScoringRule.
///
/// Implementations see forecasts already normalized to the simplex. The
/// framework turns outcome scores into s(p, r) by linearity, extends S to the
/// positive cone homogeneously and projects gradients onto the tangent space.
class RuleModel {
 public:
  virtual ~RuleModel() = default;

  virtual std::string name() const = 0;

  /// s(p, e_i) for every outcome i. Entries may be non-finite where p has
  /// zeros; the framework maps those to minus infinity.
  virtual Vector outcome_scores(std::span<const double> p) const = 0;

  /// Gradient in p of the rule's formula for s(p, r), for interior p. Any
  /// ambient extension is acceptable since only the tangent part is used.
  /// Must be linear in r; r need not be a distribution.
  virtual Vector score_gradient(std::span<const double> p, std::span<const double> r) const = 0;

  virtual DomainFlags flags() const { return {}; }

  /// Fixed outcome count, for rules bound to a baseline.
  virtual std::optional<std::size_t> dimension() const { return std::nullopt; }
};

/// A proper scoring rule s(p, r), linear in r, with its optimal expected
/// score S(x) = |x| s(x/|x|, x/|x|) on the positive cone.
///
/// Values are immutable and cheap to copy.
class ScoringRule {
 public:
  explicit ScoringRule(std::shared_ptr<const RuleModel> model);

  std::string name() const { return model_->name(); }
  DomainFlags flags() const { return model_->flags(); }
  std::optional<std::size_t> dimension() const { return model_->dimension(); }

  /// s(p, e_i) for each outcome; p is any point of the positive cone.
  std::vector<ScoreValue> outcome_scores(std::span<const double> p) const;

  /// s(p, r) for p in the positive cone. r may be any vector (the linear
  /// extension is used); minus infinity when a zero-probability outcome has
  /// positive weight in r.
  ScoreValue score(std::span<const double> p, std::span<const double> r) const;
  ScoreValue score(const Distribution& p, const Distribution& r) const {
    return score(p.weights(), r.weights());
  }

  /// Optimal expected score on the positive cone. Throws DomainError when
  /// the value is minus infinity.
  double expected(std::span<const double> x) const;

  /// Tangent part of the gradient of s(., r) at an interior p.
  TangentVector grad_p(std::span<const double> p, std::span<const double> r) const;

  /// Tangent part of the gradient of S at an interior p (the projected
  /// outcome-score vector).
  TangentVector expected_gradient(std::span<const double> p) const;

  const RuleModel& model() const noexcept { return *model_; }

 private:
  Vector normalized_forecast(std::span<const double> p) const;
  void check_dimension(std::size_t m) const;

  std::shared_ptr<const RuleModel> model_;
};

/// s(p, r) = sum r_i log p_i.
ScoringRule log_rule();

/// The Brier score -sum_i (p_i - r_i)^2, extended linearly in r from point
/// masses: 2<p, r> - |p|^2 - 1.
ScoringRule brier_rule();

/// s(p, r) = sum_i { g(p_i) + g'(p_i) (r_i - p_i) }. Throws ConfigError
/// unless g is strictly convex on (0.01, 100).
ScoringRule bregman_rule(const CurvedFunction& g);

/// Bregman rule with g(x) = x^beta / (beta (beta - 1)); beta > 1.
ScoringRule power_rule(double beta);

/// S(p) = s(p, p).
double eval_expected(const ScoringRule& rule, const Distribution& p);

TangentVector grad_p(const ScoringRule& rule, const Distribution& p, const Distribution& r);

/// Generalized entropy -S(p).
double entropy(const ScoringRule& rule, const Distribution& p);

/// The equivalent rule s(p, r) - s(q, r), whose baseline is q.
ScoringRule rebase(const ScoringRule& rule, const Distribution& q);

}  // namespace scorekit
