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
#include <functional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "scorekit/simplex.hpp"

namespace scorekit {

/// A differentiable map from an open box of parameters into the open simplex.
///
/// `evaluate` and `jacobian` throw DomainError when called outside the box.
/// Jacobian columns are tangent vectors since every p(theta) is normalized.
class ParametricModel {
 public:
  using EvalFn = std::function<Vector(std::span<const double>)>;
  using JacobianFn = std::function<Eigen::MatrixXd(std::span<const double>)>;

  ParametricModel(std::string name, std::size_t outcomes, Vector lower, Vector upper,
                  EvalFn eval, JacobianFn jac);

  const std::string& name() const noexcept { return name_; }
  std::size_t outcomes() const noexcept { return outcomes_; }
  std::size_t dim() const noexcept { return lower_.size(); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }

  bool contains(std::span<const double> theta) const;

  Distribution evaluate(std::span<const double> theta) const;
  /// outcomes() x dim() matrix of d p_i / d theta_j.
  Eigen::MatrixXd jacobian(std::span<const double> theta) const;

 private:
  void require_inside(std::span<const double> theta) const;

  std::string name_;
  std::size_t outcomes_;
  Vector lower_;
  Vector upper_;
  EvalFn eval_;
  JacobianFn jac_;
};

/// Every entry of the linear path stays at or above this margin.
inline constexpr double kLinearPathMargin = 1e-6;

/// theta -> q + theta * b on the largest symmetric interval keeping all
/// entries >= kLinearPathMargin. `b` must be a nonzero sum-zero vector.
ParametricModel linear_path_model(const Distribution& q, std::span<const double> b);

/// Softmax with the last logit pinned at zero; m - 1 parameters.
/// Parameters are confined to [-kSoftmaxBound, kSoftmaxBound] so that every
/// image point is interior for m <= 5 at the default threshold.
inline constexpr double kSoftmaxBound = 9.0;
ParametricModel softmax_model(std::size_t m);

/// theta -> ((1-theta)^2, 2 theta (1-theta), theta^2) on (eps, 1 - eps).
inline constexpr double kBinomialSquaresEpsilon = 1e-4;
ParametricModel binomial_squares_model();

}  // namespace scorekit
