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

#include "scorekit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scorekit/errors.hpp"

namespace scorekit {

Distribution::Distribution(Vector w) : weights_(std::move(w)) {
  interior_ = std::all_of(weights_.begin(), weights_.end(),
                          [](double x) { return x >= kInteriorThreshold; });
}

Distribution make_distribution(std::span<const double> weights) {
  if (weights.size() < 2) {
    throw DomainError("distribution needs at least two outcomes");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w)) {
      throw DomainError("non-finite weight at index " + std::to_string(i));
    }
    if (w < 0.0) {
      throw DomainError("negative weight at index " + std::to_string(i));
    }
    total += w;
  }
  if (total <= 0.0) {
    throw DomainError("weights sum to zero");
  }
  Vector normalized(weights.begin(), weights.end());
  for (double& w : normalized) w /= total;
  return Distribution(std::move(normalized));
}

Distribution uniform(std::size_t m) {
  if (m < 2) throw DomainError("uniform distribution needs m >= 2");
  const Vector ones(m, 1.0);
  return make_distribution(ones);
}

Distribution point_mass(std::size_t m, std::size_t i) {
  if (i >= m) throw DomainError("point mass index out of range");
  Vector w(m, 0.0);
  w[i] = 1.0;
  return make_distribution(w);
}

Distribution empirical(std::span<const int> outcomes, std::size_t m) {
  if (outcomes.empty()) throw DomainError("empirical distribution of an empty sequence");
  if (m < 2) throw DomainError("empirical distribution needs m >= 2");
  Vector counts(m, 0.0);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const int y = outcomes[k];
    if (y < 1 || static_cast<std::size_t>(y) > m) {
      throw DomainError("outcome " + std::to_string(y) + " at position " + std::to_string(k) +
                        " outside 1.." + std::to_string(m));
    }
    counts[static_cast<std::size_t>(y - 1)] += 1.0;
  }
  return make_distribution(counts);
}

Distribution from_counts(std::span<const long long> counts) {
  Vector w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw DomainError("negative count at index " + std::to_string(i));
    w[i] = static_cast<double>(counts[i]);
  }
  return make_distribution(w);
}

TangentVector TangentVector::checked(Vector components) {
  const double s = std::accumulate(components.begin(), components.end(), 0.0);
  double scale = 1.0;
  for (double c : components) scale = std::max(scale, std::abs(c));
  if (std::abs(s) > 1e-10 * scale) {
    throw DomainError("vector is not orthogonal to the all-ones vector");
  }
  return TangentVector(std::move(components));
}

TangentVector tangent_project(std::span<const double> v) {
  Vector out(v.begin(), v.end());
  if (out.empty()) return TangentVector(std::move(out));
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (double& x : out) x -= mean;
  return TangentVector(std::move(out));
}

std::vector<Vector> tangent_basis(std::size_t m) {
  std::vector<Vector> basis;
  basis.reserve(m > 0 ? m - 1 : 0);
  for (std::size_t k = 1; k < m; ++k) {
    // k leading ones followed by -k, normalized.
    Vector b(m, 0.0);
    const double kd = static_cast<double>(k);
    const double scale = 1.0 / std::sqrt(kd * (kd + 1.0));
    for (std::size_t i = 0; i < k; ++i) b[i] = scale;
    b[k] = -kd * scale;
    basis.push_back(std::move(b));
  }
  return basis;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Distribution sample_interior(std::size_t m, std::mt19937_64& rng, double floor) {
  if (m < 2) throw DomainError("sample_interior needs m >= 2");
  if (floor * static_cast<double>(m) >= 1.0) throw DomainError("floor too large for dimension");
  std::exponential_distribution<double> expo(1.0);
  Vector w(m);
  for (;;) {
    double total = 0.0;
    for (double& x : w) {
      x = expo(rng);
      total += x;
    }
    bool ok = true;
    for (double& x : w) {
      x /= total;
      ok = ok && x >= floor;
    }
    if (ok) return make_distribution(w);
  }
}

}  // namespace scorekit
