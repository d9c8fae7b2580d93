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

#include <string>
#include <string_view>
#include <vector>

namespace scorekit {

/// A scalar function on the positive reals drawn from a closed registry,
/// with exact first and second derivatives.
///
/// Registry (name, params):
///   power         [a]     x^a
///   scaled_power  [b, c]  x^b / c
///   affine_power  [b]     (x^b - 1) / (b (b - 1))
///   shifted_power [e, c]  (x^e - 1) / c
///   xlogx         []      x log x          (value 0 at x = 0)
///   neglog        []      -log x
///   identity      []      x
class CurvedFunction {
 public:
  enum class Kind { power, scaled_power, affine_power, shifted_power, xlogx, neglog, identity };

  /// Throws ConfigError for unknown names, wrong parameter counts or
  /// parameters that make the formula meaningless (c = 0, b in {0, 1}).
  static CurvedFunction from_name(std::string_view name, std::vector<double> params = {});

  static CurvedFunction power(double a) { return from_name("power", {a}); }
  static CurvedFunction scaled_power(double b, double c) { return from_name("scaled_power", {b, c}); }
  static CurvedFunction affine_power(double b) { return from_name("affine_power", {b}); }
  static CurvedFunction shifted_power(double e, double c) { return from_name("shifted_power", {e, c}); }
  static CurvedFunction xlogx() { return from_name("xlogx"); }
  static CurvedFunction neglog() { return from_name("neglog"); }
  static CurvedFunction identity() { return from_name("identity"); }

  Kind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  const std::vector<double>& params() const noexcept { return params_; }

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  /// Sampled checks on a log-spaced grid of [lo, hi].
  bool strictly_convex_on(double lo, double hi) const;
  bool strictly_increasing_on(double lo, double hi) const;
  bool positive_on(double lo, double hi) const;

  friend bool operator==(const CurvedFunction&, const CurvedFunction&) = default;

 private:
  CurvedFunction(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

  // x^e scaled by 1/c, plus offset; shared by all power kinds.
  double exponent() const;
  double divisor() const;

  Kind kind_;
  std::vector<double> params_;
};

}  // namespace scorekit
