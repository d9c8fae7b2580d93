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

#include "scorekit/weighted_family.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "scorekit/errors.hpp"

namespace scorekit {

ScoringRule WeightedFamily::member(const Distribution& q) const {
  if (!q.interior()) throw DomainError(name_ + ": baseline must be interior");
  return member_(q);
}

namespace {

std::string fmt_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string describe(const CurvedFunction& fn) {
  std::string s(fn.name());
  if (!fn.params().empty()) {
    s += '(';
    for (std::size_t i = 0; i < fn.params().size(); ++i) s += (i ? "," : "") + fmt_real(fn.params()[i]);
    s += ')';
  }
  return s;
}

void require_beta(double beta, const char* family) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw ConfigError(std::string(family) + " family requires beta > 1");
  }
}

class WeightedPowerMember final : public RuleModel {
 public:
  WeightedPowerMember(double beta, Distribution q) : beta_(beta), q_(std::move(q)) {
    w_.resize(q_.size());
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] = std::pow(q_[i], 1.0 - beta_);
  }
  std::string name() const override { return "weighted_power(" + fmt_real(beta_) + ")"; }
  std::optional<std::size_t> dimension() const override { return q_.size(); }

  Vector outcome_scores(std::span<const double> p) const override {
    double n = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) n += std::pow(p[i], beta_) * w_[i];
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      s[i] = (1.0 - n) / beta_ - (1.0 - std::pow(p[i], beta_ - 1.0) * w_[i]) / (beta_ - 1.0);
    }
    return s;
  }

  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    double rsum = 0.0;
    for (double x : r) rsum += x;
    Vector g(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      g[k] = (r[k] * std::pow(p[k], beta_ - 2.0) - rsum * std::pow(p[k], beta_ - 1.0)) * w_[k];
    }
    return g;
  }

 private:
  double beta_;
  Distribution q_;
  Vector w_;  // q_i^(1 - beta)
};

class WeightedPseudosphericalMember final : public RuleModel {
 public:
  WeightedPseudosphericalMember(double beta, Distribution q) : beta_(beta), q_(std::move(q)) {
    w_.resize(q_.size());
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] = std::pow(q_[i], 1.0 - beta_);
  }
  std::string name() const override { return "weighted_pseudospherical(" + fmt_real(beta_) + ")"; }
  std::optional<std::size_t> dimension() const override { return q_.size(); }

  Vector outcome_scores(std::span<const double> p) const override {
    const double scale = std::pow(norm_term(p), -(beta_ - 1.0) / beta_);
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      s[i] = (std::pow(p[i] / q_[i], beta_ - 1.0) * scale - 1.0) / (beta_ - 1.0);
    }
    return s;
  }

  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    const double n = norm_term(p);
    const double scale = std::pow(n, -(beta_ - 1.0) / beta_);
    double ratio_sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) ratio_sum += r[i] * std::pow(p[i] / q_[i], beta_ - 1.0);
    Vector g(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      g[k] = (r[k] * std::pow(p[k], beta_ - 2.0) - ratio_sum * std::pow(p[k], beta_ - 1.0) / n) * w_[k] * scale;
    }
    return g;
  }

 private:
  double norm_term(std::span<const double> p) const {
    double n = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) n += std::pow(p[i], beta_) * w_[i];
    return n;
  }

  double beta_;
  Distribution q_;
  Vector w_;  // q_i^(1 - beta)
};

class QuasiBregmanMember final : public RuleModel {
 public:
  QuasiBregmanMember(CurvedFunction f, CurvedFunction g, CurvedFunction h, Distribution q, MemberForm form,
                     std::string label)
      : g_(std::move(g)), h_(std::move(h)), q_(std::move(q)), label_(std::move(label)) {
    fq_.resize(q_.size());
    double fsum = 0.0;
    for (std::size_t i = 0; i < q_.size(); ++i) {
      fq_[i] = f.value(q_[i]);
      fsum += fq_[i];
    }
    if (form == MemberForm::baseline_normalized) {
      const double c = g_.d1(1.0) * h_.d1(g_.value(1.0) * fsum);
      pin_.resize(q_.size());
      for (std::size_t i = 0; i < q_.size(); ++i) pin_[i] = -c * fq_[i] / q_[i];
    }
  }

  std::string name() const override { return label_; }
  std::optional<std::size_t> dimension() const override { return q_.size(); }

  Vector outcome_scores(std::span<const double> p) const override {
    // s(p, e_i) = h(A) - h'(A) <u, p> + h'(A) u_i + pin_i,  u_i = f(q_i) g'(p_i/q_i) / q_i
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) a += fq_[i] * g_.value(p[i] / q_[i]);
    const double hp = h_.d1(a);
    Vector u(p.size());
    double up = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      u[i] = fq_[i] * g_.d1(p[i] / q_[i]) / q_[i];
      if (p[i] > 0.0) up += u[i] * p[i];
    }
    const double common = h_.value(a) - hp * up;
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      s[i] = common + hp * u[i] + (pin_.empty() ? 0.0 : pin_[i]);
    }
    return s;
  }

  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    // Hessian of S applied to r - p |r|.
    double a = 0.0;
    double rsum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      a += fq_[i] * g_.value(p[i] / q_[i]);
      rsum += r[i];
    }
    const double hp = h_.d1(a);
    const double hpp = h_.d2(a);
    Vector u(p.size()), curv(p.size()), d(p.size());
    double ud = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      u[i] = fq_[i] * g_.d1(p[i] / q_[i]) / q_[i];
      curv[i] = fq_[i] * g_.d2(p[i] / q_[i]) / (q_[i] * q_[i]);
      d[i] = r[i] - p[i] * rsum;
      ud += u[i] * d[i];
    }
    Vector grad(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) grad[k] = hpp * u[k] * ud + hp * curv[k] * d[k];
    return grad;
  }

  DomainFlags flags() const override {
    return {.forecast_boundary_ok = std::isfinite(g_.d1(0.0)), .outcome_boundary_ok = true};
  }

 private:
  CurvedFunction g_;
  CurvedFunction h_;
  Distribution q_;
  std::string label_;
  Vector fq_;
  Vector pin_;  // empty for the simplified form
};

class BregmanWeightedMember final : public RuleModel {
 public:
  BregmanWeightedMember(const CurvedFunction& f, CurvedFunction g, Distribution q, MemberForm form,
                        std::string label)
      : g_(std::move(g)), q_(std::move(q)), label_(std::move(label)), pinned_(form == MemberForm::baseline_normalized) {
    fq_.resize(q_.size());
    for (std::size_t i = 0; i < q_.size(); ++i) fq_[i] = f.value(q_[i]);
  }

  std::string name() const override { return label_; }
  std::optional<std::size_t> dimension() const override { return q_.size(); }

  Vector outcome_scores(std::span<const double> p) const override {
    // sum_j f(q_j) { g(x_j) + g'(x_j) (delta_ij - p_j) / q_j },  x_j = p_j / q_j
    double common = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double x = p[j] / q_[j];
      common += fq_[j] * g_.value(x);
      if (p[j] > 0.0) common -= fq_[j] * g_.d1(x) * x;
    }
    const double g1 = g_.d1(1.0);
    Vector s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      s[i] = common + fq_[i] * g_.d1(p[i] / q_[i]) / q_[i];
      if (pinned_) s[i] -= g1 * fq_[i] / q_[i];
    }
    return s;
  }

  Vector score_gradient(std::span<const double> p, std::span<const double> r) const override {
    double rsum = 0.0;
    for (double x : r) rsum += x;
    Vector grad(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      grad[k] = fq_[k] * g_.d2(p[k] / q_[k]) * (r[k] - p[k] * rsum) / (q_[k] * q_[k]);
    }
    return grad;
  }

  DomainFlags flags() const override {
    return {.forecast_boundary_ok = std::isfinite(g_.d1(0.0)), .outcome_boundary_ok = true};
  }

 private:
  CurvedFunction g_;
  Distribution q_;
  std::string label_;
  bool pinned_;
  Vector fq_;
};

void validate_generators(const CurvedFunction& f, const CurvedFunction& g, const CurvedFunction* h) {
  if (!f.positive_on(1e-3, 1.0)) throw ConfigError("weight function f must be positive on (0, 1)");
  if (!g.strictly_convex_on(0.01, 100.0)) throw ConfigError("g must be strictly convex");
  if (h && !h->strictly_increasing_on(0.01, 100.0)) throw ConfigError("h must be strictly increasing");
}

const char* form_suffix(MemberForm form) { return form == MemberForm::simplified ? ",simplified" : ""; }

}  // namespace

WeightedFamily weighted_power_family(double beta) {
  require_beta(beta, "weighted power");
  return WeightedFamily("weighted_power(" + fmt_real(beta) + ")", [beta](const Distribution& q) {
    return ScoringRule(std::make_shared<WeightedPowerMember>(beta, q));
  });
}

WeightedFamily weighted_pseudospherical_family(double beta) {
  require_beta(beta, "weighted pseudospherical");
  return WeightedFamily("weighted_pseudospherical(" + fmt_real(beta) + ")", [beta](const Distribution& q) {
    return ScoringRule(std::make_shared<WeightedPseudosphericalMember>(beta, q));
  });
}

WeightedFamily quasi_bregman_family(const CurvedFunction& f, const CurvedFunction& g, const CurvedFunction& h,
                                    MemberForm form) {
  validate_generators(f, g, &h);
  const std::string label =
      "quasi_bregman[" + describe(f) + "," + describe(g) + "," + describe(h) + form_suffix(form) + "]";
  return WeightedFamily(label, [f, g, h, form, label](const Distribution& q) {
    return ScoringRule(std::make_shared<QuasiBregmanMember>(f, g, h, q, form, label));
  });
}

WeightedFamily bregman_weighted_family(const CurvedFunction& f, const CurvedFunction& g, MemberForm form) {
  validate_generators(f, g, nullptr);
  const std::string label = "bregman[" + describe(f) + "," + describe(g) + form_suffix(form) + "]";
  return WeightedFamily(label, [f, g, form, label](const Distribution& q) {
    return ScoringRule(std::make_shared<BregmanWeightedMember>(f, g, q, form, label));
  });
}

WeightedFamily trivial_family(const ScoringRule& rule) {
  return WeightedFamily("trivial[" + rule.name() + "]",
                        [rule](const Distribution& q) { return rebase(rule, q); });
}

CurvedFunction power_family_h(double beta) {
  require_beta(beta, "weighted power");
  return CurvedFunction::shifted_power(1.0, beta * (beta - 1.0));
}

CurvedFunction pseudospherical_family_h(double beta) {
  require_beta(beta, "weighted pseudospherical");
  return CurvedFunction::shifted_power(1.0 / beta, beta * (beta - 1.0));
}

}  // namespace scorekit
