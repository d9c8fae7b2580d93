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

#include "scorekit/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "scorekit/errors.hpp"

namespace scorekit {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kLooseTol = 1e-8;
constexpr int kMaxHalvings = 60;
constexpr double kMaxStep = 1e8;
// Stalled iterates with an entry below this level are escaping to the boundary.
constexpr double kEscapeLevel = 1e-6;

struct Descent {
  Vector p;
  double value = 0.0;
  double grad_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

Vector multiplicative_step(const Vector& p, const Vector& g, double eta) {
  Vector logits(p.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    logits[i] = std::log(p[i]) - eta * g[i];
    mx = std::max(mx, logits[i]);
  }
  Vector out(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

Vector log_ratio(const Vector& a, const Vector& b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::log(a[i] / b[i]);
  return out;
}

bool touches_boundary(const Vector& p) {
  return std::any_of(p.begin(), p.end(), [](double x) { return x < kInteriorThreshold; });
}

Descent descend(const ScoringRule& rule, Vector p, const BaselineOptions& opts) {
  Descent d;
  d.value = rule.expected(p);
  Vector g = rule.expected_gradient(p).vector();
  d.grad_norm = norm2(g);
  double eta = 1.0;
  for (; d.iterations < opts.max_iters && d.grad_norm > opts.grad_tol; ++d.iterations) {
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, eta *= 0.5) {
      const Vector trial = multiplicative_step(p, g, eta);
      if (touches_boundary(trial)) continue;
      const double value = rule.expected(trial);
      double decrease = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) decrease += g[i] * (trial[i] - p[i]);
      const Vector g_trial = rule.expected_gradient(trial).vector();
      const double gn_trial = norm2(g_trial);
      const bool armijo = value <= d.value + kArmijo * decrease;
      // Near the minimizer S changes below rounding; accept steps that do
      // not increase S beyond rounding and shrink the gradient.
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(d.value));
      const bool flat = value <= d.value + slack && gn_trial < d.grad_norm;
      if (armijo || flat) {
        // Barzilai-Borwein step in log coordinates for the next iteration.
        double ss = 0.0, sy = 0.0;
        const Vector s = tangent_project(log_ratio(trial, p)).vector();
        for (std::size_t i = 0; i < p.size(); ++i) {
          ss += s[i] * s[i];
          sy += s[i] * (g_trial[i] - g[i]);
        }
        p = trial;
        g = g_trial;
        d.value = value;
        d.grad_norm = gn_trial;
        accepted = true;
        eta = sy > 0.0 ? std::clamp(ss / sy, 1e-10, kMaxStep) : std::min(eta * 2.0, kMaxStep);
        break;
      }
    }
    if (!accepted) break;
  }
  d.p = std::move(p);
  return d;
}

}  // namespace

BaselineResult find_baseline(const ScoringRule& rule, std::optional<std::size_t> m,
                             const BaselineOptions& opts) {
  const auto dim = m ? m : rule.dimension();
  if (!dim) throw DomainError(rule.name() + ": outcome count required to locate the baseline");
  if (*dim < 2) throw DomainError("baseline needs m >= 2");
  if (rule.dimension() && *rule.dimension() != *dim) {
    throw DomainError(rule.name() + ": outcome count mismatch");
  }

  std::mt19937_64 rng(opts.seed);
  std::optional<Descent> best;
  int total_iters = 0;
  const int starts = std::max(1, opts.restarts);
  for (int s = 0; s < starts; ++s) {
    Vector start = s == 0 ? uniform(*dim).vector() : sample_interior(*dim, rng, 0.01).vector();
    Descent d = descend(rule, std::move(start), opts);
    total_iters += d.iterations;
    const double smallest = *std::min_element(d.p.begin(), d.p.end());
    if (d.grad_norm > kLooseTol && smallest < kEscapeLevel) {
      throw DomainError(rule.name() + ": entropy maximizer is on the simplex boundary");
    }
    if (!best || d.value < best->value) best = std::move(d);
  }
  if (best->grad_norm > kLooseTol) {
    throw NumericError(rule.name() + ": baseline search did not converge (gradient norm " +
                       std::to_string(best->grad_norm) + ")");
  }
  return BaselineResult{make_distribution(best->p), best->grad_norm, total_iters};
}

Distribution baseline(const ScoringRule& rule, std::optional<std::size_t> m, const BaselineOptions& opts) {
  return find_baseline(rule, m, opts).point;
}

}  // namespace scorekit
