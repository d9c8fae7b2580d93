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

#include "scorekit/parametric_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scorekit/errors.hpp"

namespace scorekit {

ParametricModel::ParametricModel(std::string name, std::size_t outcomes, Vector lower,
                                 Vector upper, EvalFn eval, JacobianFn jac)
    : name_(std::move(name)),
      outcomes_(outcomes),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      eval_(std::move(eval)),
      jac_(std::move(jac)) {
  if (lower_.size() != upper_.size() || lower_.empty()) {
    throw ConfigError("model parameter box is malformed");
  }
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j])) throw ConfigError("model parameter box is empty");
  }
}

bool ParametricModel::contains(std::span<const double> theta) const {
  if (theta.size() != dim()) return false;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (!(theta[j] > lower_[j] && theta[j] < upper_[j])) return false;
  }
  return true;
}

void ParametricModel::require_inside(std::span<const double> theta) const {
  if (theta.size() != dim()) {
    throw DomainError(name_ + ": expected " + std::to_string(dim()) + " parameters");
  }
  if (!contains(theta)) throw DomainError(name_ + ": parameter outside the model domain");
}

Distribution ParametricModel::evaluate(std::span<const double> theta) const {
  require_inside(theta);
  return make_distribution(eval_(theta));
}

Eigen::MatrixXd ParametricModel::jacobian(std::span<const double> theta) const {
  require_inside(theta);
  return jac_(theta);
}

ParametricModel linear_path_model(const Distribution& q, std::span<const double> b) {
  if (!q.interior()) throw DomainError("linear path base point must be interior");
  if (b.size() != q.size()) throw DomainError("linear path direction has wrong length");
  const double bnorm = norm2(b);
  if (bnorm == 0.0) throw DomainError("linear path direction is zero");
  const double sum = std::accumulate(b.begin(), b.end(), 0.0);
  double scale = 0.0;
  for (double x : b) scale = std::max(scale, std::abs(x));
  if (std::abs(sum) > 1e-10 * std::max(1.0, scale)) {
    throw DomainError("linear path direction is not orthogonal to the all-ones vector");
  }

  double tau = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] != 0.0) tau = std::min(tau, (q[i] - kLinearPathMargin) / std::abs(b[i]));
  }
  if (!(tau > 0.0)) throw DomainError("base point too close to the boundary for a linear path");

  Vector base = q.vector();
  Vector dir(b.begin(), b.end());
  auto eval = [base, dir](std::span<const double> theta) {
    Vector p(base.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = base[i] + theta[0] * dir[i];
    return p;
  };
  auto jac = [dir](std::span<const double>) {
    Eigen::MatrixXd j(dir.size(), 1);
    for (std::size_t i = 0; i < dir.size(); ++i) j(static_cast<Eigen::Index>(i), 0) = dir[i];
    return j;
  };
  return ParametricModel("linear_path", q.size(), {-tau}, {tau}, eval, jac);
}

namespace {

Vector softmax_probs(std::span<const double> theta) {
  const std::size_t m = theta.size() + 1;
  double mx = 0.0;
  for (double t : theta) mx = std::max(mx, t);
  Vector p(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    p[i] = std::exp((i + 1 < m ? theta[i] : 0.0) - mx);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

ParametricModel softmax_model(std::size_t m) {
  if (m < 2) throw DomainError("softmax model needs m >= 2");
  Vector lower(m - 1, -kSoftmaxBound);
  Vector upper(m - 1, kSoftmaxBound);
  auto jac = [m](std::span<const double> theta) {
    const Vector p = softmax_probs(theta);
    Eigen::MatrixXd j(m, m - 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k + 1 < m; ++k) {
        j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            p[i] * ((i == k ? 1.0 : 0.0) - p[k]);
      }
    }
    return j;
  };
  return ParametricModel("softmax", m, std::move(lower), std::move(upper), softmax_probs, jac);
}

ParametricModel binomial_squares_model() {
  auto eval = [](std::span<const double> theta) {
    const double t = theta[0];
    return Vector{(1.0 - t) * (1.0 - t), 2.0 * t * (1.0 - t), t * t};
  };
  auto jac = [](std::span<const double> theta) {
    const double t = theta[0];
    Eigen::MatrixXd j(3, 1);
    j << -2.0 * (1.0 - t), 2.0 - 4.0 * t, 2.0 * t;
    return j;
  };
  return ParametricModel("binomial_squares", 3, {kBinomialSquaresEpsilon},
                         {1.0 - kBinomialSquaresEpsilon}, eval, jac);
}

}  // namespace scorekit
