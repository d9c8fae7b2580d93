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

#include "scorekit/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "scorekit/errors.hpp"

namespace scorekit {

std::optional<EquivalenceWitness> equivalence_fit(const ScoringRule& rule1, const ScoringRule& rule2,
                                                  std::optional<std::size_t> m,
                                                  const EquivalenceOptions& opts) {
  const auto dim = m ? m : (rule1.dimension() ? rule1.dimension() : rule2.dimension());
  if (!dim) throw DomainError("equivalence_fit needs an outcome count");
  for (const ScoringRule* r : {&rule1, &rule2}) {
    if (r->dimension() && *r->dimension() != *dim) throw DomainError("rules disagree on outcome count");
  }

  std::mt19937_64 rng(opts.seed);
  const std::size_t n = static_cast<std::size_t>(std::max(2, opts.probes));
  // s1[k][i] = rule1(p_k, e_i)
  std::vector<Vector> s1(n), s2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Distribution p = sample_interior(*dim, rng);
    for (const ScoreValue& v : rule1.outcome_scores(p.weights())) s1[k].push_back(v.value());
    for (const ScoreValue& v : rule2.outcome_scores(p.weights())) s2[k].push_back(v.value());
  }

  // Common slope a, per-outcome intercepts c_i = a b_i.
  Vector mean1(*dim, 0.0), mean2(*dim, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < *dim; ++i) {
      mean1[i] += s1[k][i] / static_cast<double>(n);
      mean2[i] += s2[k][i] / static_cast<double>(n);
    }
  }
  double sxy = 0.0, sxx = 0.0, scale = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < *dim; ++i) {
      const double dx = s2[k][i] - mean2[i];
      sxy += dx * (s1[k][i] - mean1[i]);
      sxx += dx * dx;
      scale = std::max(scale, std::abs(s1[k][i]));
    }
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double a = sxy / sxx;
  if (!(a > 0.0)) return std::nullopt;

  EquivalenceWitness w;
  w.a = a;
  w.b.resize(*dim);
  for (std::size_t i = 0; i < *dim; ++i) w.b[i] = (mean1[i] - a * mean2[i]) / a;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < *dim; ++i) {
      w.max_residual = std::max(w.max_residual, std::abs(s1[k][i] - a * (s2[k][i] + w.b[i])));
    }
  }
  if (w.max_residual > opts.tolerance * scale) return std::nullopt;
  return w;
}

}  // namespace scorekit
