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

#include "scorekit/compatibility.hpp"

#include <algorithm>
#include <cmath>

#include "scorekit/errors.hpp"

namespace scorekit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::compatible: return "compatible";
    case Verdict::incompatible: return "incompatible";
    case Verdict::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

CompatReport check_compatibility(const WeightedFamily& family, const ScoringRule& rule,
                                 const std::vector<Distribution>& qs, const std::vector<Distribution>& rs,
                                 double tol) {
  if (qs.empty() || rs.empty()) throw DomainError("compatibility check needs q and r probes");
  const std::size_t m = qs.front().size();
  if (m < 2) throw DomainError("compatibility check needs m >= 2");
  for (const auto* list : {&qs, &rs}) {
    for (const Distribution& d : *list) {
      if (d.size() != m) throw DomainError("probe distributions disagree on outcome count");
      if (!d.interior()) throw DomainError("compatibility probes must be interior");
    }
  }

  CompatReport report;
  report.tolerance = tol;
  report.qs = qs;
  report.rs = rs;
  report.degenerate_dimension = m == 2;

  bool factors_positive = true;
  for (std::size_t iq = 0; iq < qs.size(); ++iq) {
    const Distribution& q = qs[iq];
    const ScoringRule member = family.member(q);
    std::vector<double> factors;
    for (std::size_t ir = 0; ir < rs.size(); ++ir) {
      const Distribution& r = rs[ir];
      if (max_abs_diff(r.weights(), q.weights()) < kProbeSeparation) continue;
      const Vector v = member.grad_p(q.weights(), r.weights()).vector();
      const Vector w = rule.grad_p(q.weights(), r.weights()).vector();
      const double vv = dot(v, v);
      const double ww = dot(w, w);
      if (!(vv > 0.0) || !(ww > 0.0)) throw NumericError("vanishing gradient at an off-baseline probe");
      const double vw = dot(v, w);
      CompatProbe probe{iq, ir, std::max(0.0, 1.0 - vw * vw / (vv * ww)), vw / vv};
      report.parallel_deviation = std::max(report.parallel_deviation, probe.deviation);
      factors_positive = factors_positive && probe.factor > 0.0;
      factors.push_back(probe.factor);
      report.probes.push_back(probe);
    }
    if (factors.empty()) {
      report.a_of_q.push_back(std::nan(""));
      report.spread_of_q.push_back(0.0);
      continue;
    }
    const double a = median(factors);
    double spread = 0.0;
    for (double f : factors) spread = std::max(spread, std::abs(f - a) / std::abs(a));
    report.a_of_q.push_back(a);
    report.spread_of_q.push_back(spread);
    report.factor_spread = std::max(report.factor_spread, spread);
  }
  if (report.probes.empty()) throw DomainError("every r probe coincides with its baseline");

  if (report.degenerate_dimension) {
    report.verdict = Verdict::degenerate;
  } else if (report.parallel_deviation <= tol && factors_positive && report.factor_spread <= tol) {
    report.verdict = Verdict::compatible;
  } else {
    report.verdict = Verdict::incompatible;
  }
  return report;
}

double first_derivative_factor(const CurvedFunction& g, const CurvedFunction& h) {
  const double a = h.d1(g.value(1.0)) * g.d1(1.0);
  if (!(a > 0.0)) throw ConfigError("compatibility factor must be positive");
  return a;
}

double log_compatibility_factor(const CurvedFunction& g, const CurvedFunction& h) {
  const double curvature = h.d1(g.value(1.0)) * g.d2(1.0);
  if (!(curvature > 0.0) || !std::isfinite(curvature)) throw ConfigError("compatibility factor must be positive");
  return 1.0 / curvature;
}

CurvedFunction bregman_compatible_weight(const CurvedFunction& g) {
  using Kind = CurvedFunction::Kind;
  // x^2 g''(x) = coeff * x^e for every power-type generator.
  auto power_weight = [](double e, double coeff) {
    if (!(coeff > 0.0)) throw ConfigError("x^2 g''(x) is not positive on (0, 1)");
    return coeff == 1.0 ? CurvedFunction::power(e) : CurvedFunction::scaled_power(e, 1.0 / coeff);
  };
  const auto& p = g.params();
  switch (g.kind()) {
    case Kind::power: return power_weight(p[0], p[0] * (p[0] - 1.0));
    case Kind::scaled_power: return power_weight(p[0], p[0] * (p[0] - 1.0) / p[1]);
    case Kind::affine_power: return CurvedFunction::power(p[0]);
    case Kind::shifted_power: return power_weight(p[0], p[0] * (p[0] - 1.0) / p[1]);
    case Kind::xlogx: return CurvedFunction::identity();
    case Kind::neglog: return CurvedFunction::power(0.0);
    case Kind::identity: break;
  }
  throw ConfigError("x^2 g''(x) is not positive on (0, 1)");
}

Eigen::MatrixXd hessian_restricted(const ScoringRule& rule, const Distribution& q, double step) {
  if (!q.interior()) throw DomainError("restricted Hessian needs an interior point");
  const std::size_t m = q.size();
  const std::vector<Vector> basis = tangent_basis(m);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd hess(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    Vector plus = q.vector(), minus = q.vector();
    for (std::size_t i = 0; i < m; ++i) {
      plus[i] += step * basis[static_cast<std::size_t>(l)][i];
      minus[i] -= step * basis[static_cast<std::size_t>(l)][i];
    }
    const Vector gp = rule.expected_gradient(plus).vector();
    const Vector gm = rule.expected_gradient(minus).vector();
    for (Eigen::Index k = 0; k < n; ++k) {
      const Vector& bk = basis[static_cast<std::size_t>(k)];
      hess(k, l) = (dot(bk, gp) - dot(bk, gm)) / (2.0 * step);
    }
  }
  if (!hess.allFinite()) throw NumericError("restricted Hessian has non-finite entries");
  return hess;
}

}  // namespace scorekit
