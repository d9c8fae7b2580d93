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
#include <random>
#include <span>
#include <vector>

namespace scorekit {

using Vector = std::vector<double>;

/// Entries at or above this value count as strictly positive.
inline constexpr double kInteriorThreshold = 1e-9;

/// Tolerance on the sum of a normalized distribution.
inline constexpr double kSumTolerance = 1e-12;

/// A point of the probability simplex over outcomes {1, ..., m}.
///
/// Always normalized on construction. `interior()` reports whether every
/// entry reaches kInteriorThreshold, i.e. whether the point lies in the
/// open simplex where log- and ratio-type rules have bounded gradients.
class Distribution {
 public:
  std::size_t size() const noexcept { return weights_.size(); }
  bool interior() const noexcept { return interior_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  const Vector& vector() const noexcept { return weights_; }

  auto begin() const noexcept { return weights_.begin(); }
  auto end() const noexcept { return weights_.end(); }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(Vector w);
  friend Distribution make_distribution(std::span<const double>);

  Vector weights_;
  bool interior_ = false;
};

/// Normalizes nonnegative weights. Throws DomainError on negative,
/// non-finite or all-zero input, or when fewer than two outcomes are given.
Distribution make_distribution(std::span<const double> weights);
inline Distribution make_distribution(std::initializer_list<double> weights) {
  return make_distribution(std::span<const double>(weights.begin(), weights.size()));
}

Distribution uniform(std::size_t m);

/// The point mass on outcome `i` (0-based).
Distribution point_mass(std::size_t m, std::size_t i);

/// Empirical distribution of 1-based outcomes in {1, ..., m}.
Distribution empirical(std::span<const int> outcomes, std::size_t m);

/// Distribution proportional to nonnegative integer counts.
Distribution from_counts(std::span<const long long> counts);

/// A vector orthogonal to the all-ones vector.
class TangentVector {
 public:
  TangentVector() = default;

  std::size_t size() const noexcept { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }
  std::span<const double> components() const noexcept { return components_; }
  const Vector& vector() const noexcept { return components_; }
  auto begin() const noexcept { return components_.begin(); }
  auto end() const noexcept { return components_.end(); }

  /// Wraps components already known to sum to zero within 1e-10.
  /// Throws DomainError otherwise.
  static TangentVector checked(Vector components);

 private:
  explicit TangentVector(Vector v) : components_(std::move(v)) {}
  friend TangentVector tangent_project(std::span<const double>);

  Vector components_;
};

/// Removes the mean: v - mean(v) * 1.
TangentVector tangent_project(std::span<const double> v);

/// Orthonormal basis of the sum-zero subspace of R^m (m - 1 vectors,
/// Helmert construction).
std::vector<Vector> tangent_basis(std::size_t m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// Draws a Dirichlet(1,...,1) point whose entries are all >= `floor`
/// (rejection sampling; `floor` must be < 1/m).
Distribution sample_interior(std::size_t m, std::mt19937_64& rng, double floor = 0.02);

}  // namespace scorekit
