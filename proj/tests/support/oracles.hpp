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

// Independent numerical oracles: central differences, grid search and
// brute-force helpers. Nothing here calls the library's analytic gradients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "scorekit/parametric_model.hpp"
#include "scorekit/scoring_rule.hpp"
#include "scorekit/simplex.hpp"

namespace scorekit::oracle {

inline constexpr double kFdStep = 1e-6;

using ScalarFn = std::function<double(std::span<const double>)>;

/// Central-difference gradient of f at x.
inline Vector fd_gradient(const ScalarFn& f, std::span<const double> x, double h = kFdStep) {
  Vector g(x.size());
  Vector y(x.begin(), x.end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = y[k];
    y[k] = x0 + h;
    const double fp = f(y);
    y[k] = x0 - h;
    const double fm = f(y);
    y[k] = x0;
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Tangent gradient of f at a simplex point: central differences along an
/// orthonormal sum-zero basis, reassembled in ambient coordinates.
inline Vector fd_tangent_gradient(const ScalarFn& f, std::span<const double> p, double h = kFdStep) {
  const std::size_t m = p.size();
  Vector out(m, 0.0);
  Vector y(m);
  for (const Vector& e : tangent_basis(m)) {
    for (std::size_t i = 0; i < m; ++i) y[i] = p[i] + h * e[i];
    const double fp = f(y);
    for (std::size_t i = 0; i < m; ++i) y[i] = p[i] - h * e[i];
    const double fm = f(y);
    const double d = (fp - fm) / (2.0 * h);
    for (std::size_t i = 0; i < m; ++i) out[i] += d * e[i];
  }
  return out;
}

/// Sup-norm error relative to the oracle, with a floor on the denominator
/// so that near-zero gradients are compared absolutely.
inline double rel_error(std::span<const double> got, std::span<const double> want, double floor = 1e-3) {
  double scale = floor;
  for (double w : want) scale = std::max(scale, std::abs(w));
  return max_abs_diff(got, want) / scale;
}

inline double rel_error(double got, double want, double floor = 1e-3) {
  return std::abs(got - want) / std::max(floor, std::abs(want));
}

struct GridMax {
  double arg = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  double runner_up_gap = 0.0;  // best value minus best value at least two steps away
};

/// Exhaustive search of a scalar function over lo, lo + step, ..., hi.
inline GridMax grid_argmax(const std::function<double(double)>& f, double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
  std::vector<double> vals(n);
  GridMax best;
  std::size_t ibest = 0;
  for (std::size_t k = 0; k < n; ++k) {
    vals[k] = f(lo + static_cast<double>(k) * step);
    if (vals[k] > best.value) {
      best.value = vals[k];
      best.arg = lo + static_cast<double>(k) * step;
      ibest = k;
    }
  }
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 < ibest || k > ibest + 1) other = std::max(other, vals[k]);
  }
  best.runner_up_gap = best.value - other;
  return best;
}

/// Score of the rule at (p, r) as a plain double (throws on minus infinity).
inline double score(const ScoringRule& rule, std::span<const double> p, std::span<const double> r) {
  return rule.score(p, r).value();
}

/// theta -> s(p(theta), r) for a one-parameter model.
inline std::function<double(double)> model_objective(const ScoringRule& rule, const ParametricModel& model,
                                                     const Distribution& r) {
  return [&rule, &model, r](double t) {
    const Distribution p = model.evaluate(std::span<const double>(&t, 1));
    return rule.score(p, r).value();
  };
}

/// Closed-form log-likelihood maximizer of the binomial-squares model.
inline double binomial_squares_mle(const Distribution& r) { return (r[1] + 2.0 * r[2]) / 2.0; }

/// 1 - cos^2 of the angle between two vectors, computed directly.
inline double angle_deviation(std::span<const double> v, std::span<const double> w) {
  double vw = 0.0, vv = 0.0, ww = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    vw += v[i] * w[i];
    vv += v[i] * v[i];
    ww += w[i] * w[i];
  }
  return 1.0 - vw * vw / (vv * ww);
}

inline std::vector<Distribution> draw_interior(std::size_t count, std::size_t m, std::mt19937_64& rng,
                                               double floor = 0.02) {
  std::vector<Distribution> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sample_interior(m, rng, floor));
  return out;
}

}  // namespace scorekit::oracle
