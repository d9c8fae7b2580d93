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

#include "scorekit/scoring_rule.hpp"

#include <cmath>
#include <sstream>

#include "scorekit/errors.hpp"

namespace scorekit {

double ScoreValue::value() const {
  if (!value_) throw DomainError("score is minus infinity");
  return *value_;
}

ScoringRule::ScoringRule(std::shared_ptr<const RuleModel> model) : model_(std::move(model)) {
  if (!model_) throw ConfigError("scoring rule without implementation");
}

void ScoringRule::check_dimension(std::size_t m) const {
  if (m < 2) throw DomainError(name() + ": need at least two outcomes");
  if (const auto d = dimension(); d && *d != m) {
    throw DomainError(name() + ": expects " + std::to_string(*d) + " outcomes, got " +
                      std::to_string(m));
  }
}

Vector ScoringRule::normalized_forecast(std::span<const double> p) const {
  check_dimension(p.size());
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError(name() + ": forecast entries must be finite and nonnegative");
    total += x;
  }
  if (total <= 0.0) throw DomainError(name() + ": forecast sums to zero");
  Vector out(p.begin(), p.end());
  if (total != 1.0) {
    for (double& x : out) x /= total;
  }
  return out;
}

std::vector<ScoreValue> ScoringRule::outcome_scores(std::span<const double> p) const {
  const Vector raw = model_->outcome_scores(normalized_forecast(p));
  std::vector<ScoreValue> out;
  out.reserve(raw.size());
  for (double v : raw) {
    out.push_back(std::isfinite(v) ? ScoreValue::finite(v) : ScoreValue::negative_infinity());
  }
  return out;
}

ScoreValue ScoringRule::score(std::span<const double> p, std::span<const double> r) const {
  if (r.size() != p.size()) throw DomainError(name() + ": forecast and outcome sizes differ");
  const Vector sigma = model_->outcome_scores(normalized_forecast(p));
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0.0) continue;
    if (!std::isfinite(sigma[i])) {
      if (r[i] > 0.0) return ScoreValue::negative_infinity();
      throw DomainError(name() + ": unbounded score against a signed outcome vector");
    }
    total += r[i] * sigma[i];
  }
  return ScoreValue::finite(total);
}

double ScoringRule::expected(std::span<const double> x) const {
  const Vector p = normalized_forecast(x);
  double lambda = 0.0;
  for (double v : x) lambda += v;
  const ScoreValue s = score(p, p);
  if (!s.is_finite()) throw DomainError(name() + ": optimal expected score is minus infinity");
  return lambda * s.value();
}

TangentVector ScoringRule::grad_p(std::span<const double> p, std::span<const double> r) const {
  if (r.size() != p.size()) throw DomainError(name() + ": forecast and outcome sizes differ");
  const Vector pn = normalized_forecast(p);
  for (double v : pn) {
    if (v < kInteriorThreshold) throw DomainError(name() + ": gradient requires an interior forecast");
  }
  const Vector g = model_->score_gradient(pn, r);
  for (double v : g) {
    if (!std::isfinite(v)) throw NumericError(name() + ": non-finite gradient");
  }
  // Chain rule through the normalization p -> p / |p| when p is off the simplex.
  double total = 0.0;
  for (double v : p) total += v;
  TangentVector t = tangent_project(g);
  if (total == 1.0) return t;
  Vector scaled = t.vector();
  for (double& v : scaled) v /= total;
  return tangent_project(scaled);
}

TangentVector ScoringRule::expected_gradient(std::span<const double> p) const {
  const Vector pn = normalized_forecast(p);
  for (double v : pn) {
    if (v < kInteriorThreshold) throw DomainError(name() + ": gradient requires an interior forecast");
  }
  const Vector sigma = model_->outcome_scores(pn);
  for (double v : sigma) {
    if (!std::isfinite(v)) throw NumericError(name() + ": non-finite outcome score");
  }
  return tangent_project(sigma);
}

namespace {

class LogRule final : public RuleModel {
 public:
  std::string name() const override { return "log"; }
  Vector outcome_scores(std::span<const double> p) const override {
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      s[i] = p[i] > 0.0 ? std::log(p[i]) : -HUGE_VAL;
    }
    return s;
  }
  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    Vector g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) g[i] = r[i] / p[i];
    return g;
  }
  DomainFlags flags() const override { return {.forecast_boundary_ok = false, .outcome_boundary_ok = true}; }
};

class BrierRule final : public RuleModel {
 public:
  std::string name() const override { return "brier"; }
  Vector outcome_scores(std::span<const double> p) const override {
    double sq = 0.0;
    for (double x : p) sq += x * x;
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) s[i] = 2.0 * p[i] - sq - 1.0;
    return s;
  }
  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    double rsum = 0.0;
    for (double x : r) rsum += x;
    Vector g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) g[i] = 2.0 * r[i] - 2.0 * p[i] * rsum;
    return g;
  }
};

class BregmanRule final : public RuleModel {
 public:
  BregmanRule(CurvedFunction g, std::string label) : g_(std::move(g)), label_(std::move(label)) {}

  std::string name() const override { return label_; }

  Vector outcome_scores(std::span<const double> p) const override {
    // s(p, e_i) = sum_j { g(p_j) - g'(p_j) p_j } + g'(p_i)
    double common = 0.0;
    for (double x : p) {
      common += g_.value(x);
      if (x > 0.0) common -= g_.d1(x) * x;
    }
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) s[i] = common + g_.d1(p[i]);
    return s;
  }

  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    // d/dp_k = g''(p_k) (r_k - p_k |r|); |r| = 1 for distributions.
    double rsum = 0.0;
    for (double x : r) rsum += x;
    Vector g(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) g[k] = g_.d2(p[k]) * (r[k] - p[k] * rsum);
    return g;
  }

  DomainFlags flags() const override {
    return {.forecast_boundary_ok = std::isfinite(g_.d1(0.0)), .outcome_boundary_ok = true};
  }

 private:
  CurvedFunction g_;
  std::string label_;
};

class RebasedRule final : public RuleModel {
 public:
  RebasedRule(ScoringRule base, Distribution q)
      : base_(std::move(base)), q_(std::move(q)), q_scores_(base_.model().outcome_scores(q_.weights())) {}

  std::string name() const override { return "rebase(" + base_.name() + ")"; }

  Vector outcome_scores(std::span<const double> p) const override {
    Vector s = base_.model().outcome_scores(p);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= q_scores_[i];
    return s;
  }
  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    return base_.model().score_gradient(p, r);
  }
  DomainFlags flags() const override { return base_.flags(); }
  std::optional<std::size_t> dimension() const override { return q_.size(); }

 private:
  ScoringRule base_;
  Distribution q_;
  Vector q_scores_;
};

std::string describe(const CurvedFunction& g) {
  std::ostringstream os;
  os.precision(17);
  os << g.name();
  if (!g.params().empty()) {
    os << '(';
    for (std::size_t i = 0; i < g.params().size(); ++i) os << (i ? "," : "") << g.params()[i];
    os << ')';
  }
  return os.str();
}

}  // namespace

ScoringRule log_rule() { return ScoringRule(std::make_shared<LogRule>()); }

ScoringRule brier_rule() { return ScoringRule(std::make_shared<BrierRule>()); }

ScoringRule bregman_rule(const CurvedFunction& g) {
  if (!g.strictly_convex_on(0.01, 100.0)) {
    throw ConfigError("bregman generator " + describe(g) + " is not strictly convex");
  }
  return ScoringRule(std::make_shared<BregmanRule>(g, "bregman[" + describe(g) + "]"));
}

ScoringRule power_rule(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw ConfigError("power rule requires beta > 1");
  std::ostringstream os;
  os.precision(17);
  os << "power(" << beta << ")";
  return ScoringRule(std::make_shared<BregmanRule>(
      CurvedFunction::scaled_power(beta, beta * (beta - 1.0)), os.str()));
}

double eval_expected(const ScoringRule& rule, const Distribution& p) { return rule.expected(p.weights()); }

TangentVector grad_p(const ScoringRule& rule, const Distribution& p, const Distribution& r) {
  return rule.grad_p(p.weights(), r.weights());
}

double entropy(const ScoringRule& rule, const Distribution& p) { return -eval_expected(rule, p); }

ScoringRule rebase(const ScoringRule& rule, const Distribution& q) {
  if (!q.interior()) throw DomainError("rebase requires an interior baseline");
  if (const auto d = rule.dimension(); d && *d != q.size()) {
    throw DomainError("rebase baseline has the wrong number of outcomes");
  }
  return ScoringRule(std::make_shared<RebasedRule>(rule, q));
}

}  // namespace scorekit
