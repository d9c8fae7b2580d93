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

#include "scorekit/curved_function.hpp"

#include <cmath>
#include <string>

#include "scorekit/errors.hpp"

namespace scorekit {

namespace {

constexpr int kSampleCount = 200;

template <typename Pred>
bool holds_on_grid(double lo, double hi, Pred pred) {
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k <= kSampleCount; ++k) {
    const double x = std::exp(a + (b - a) * k / kSampleCount);
    if (!pred(x)) return false;
  }
  return true;
}

void expect_params(std::string_view name, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n) {
    throw ConfigError("curved function '" + std::string(name) + "' takes " + std::to_string(n) +
                      " parameter(s), got " + std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw ConfigError("curved function parameter is not finite");
  }
}

}  // namespace

CurvedFunction CurvedFunction::from_name(std::string_view name, std::vector<double> params) {
  if (name == "power") {
    expect_params(name, params, 1);
    return {Kind::power, std::move(params)};
  }
  if (name == "scaled_power") {
    expect_params(name, params, 2);
    if (params[1] == 0.0) throw ConfigError("scaled_power divisor must be nonzero");
    return {Kind::scaled_power, std::move(params)};
  }
  if (name == "affine_power") {
    expect_params(name, params, 1);
    if (params[0] == 0.0 || params[0] == 1.0) throw ConfigError("affine_power exponent must not be 0 or 1");
    return {Kind::affine_power, std::move(params)};
  }
  if (name == "shifted_power") {
    expect_params(name, params, 2);
    if (params[1] == 0.0) throw ConfigError("shifted_power divisor must be nonzero");
    return {Kind::shifted_power, std::move(params)};
  }
  if (name == "xlogx") {
    expect_params(name, params, 0);
    return {Kind::xlogx, {}};
  }
  if (name == "neglog") {
    expect_params(name, params, 0);
    return {Kind::neglog, {}};
  }
  if (name == "identity") {
    expect_params(name, params, 0);
    return {Kind::identity, {}};
  }
  throw ConfigError("unknown curved function '" + std::string(name) + "'");
}

std::string_view CurvedFunction::name() const noexcept {
  switch (kind_) {
    case Kind::power: return "power";
    case Kind::scaled_power: return "scaled_power";
    case Kind::affine_power: return "affine_power";
    case Kind::shifted_power: return "shifted_power";
    case Kind::xlogx: return "xlogx";
    case Kind::neglog: return "neglog";
    case Kind::identity: return "identity";
  }
  return "unknown";
}

double CurvedFunction::exponent() const {
  switch (kind_) {
    case Kind::power:
    case Kind::scaled_power:
    case Kind::affine_power:
    case Kind::shifted_power: return params_[0];
    case Kind::identity: return 1.0;
    default: return 0.0;
  }
}

double CurvedFunction::divisor() const {
  switch (kind_) {
    case Kind::scaled_power:
    case Kind::shifted_power: return params_[1];
    case Kind::affine_power: return params_[0] * (params_[0] - 1.0);
    default: return 1.0;
  }
}

double CurvedFunction::value(double x) const {
  switch (kind_) {
    case Kind::xlogx: return x == 0.0 ? 0.0 : x * std::log(x);
    case Kind::neglog: return -std::log(x);
    case Kind::identity: return x;
    case Kind::affine_power:
    case Kind::shifted_power: return (std::pow(x, exponent()) - 1.0) / divisor();
    default: return std::pow(x, exponent()) / divisor();
  }
}

double CurvedFunction::d1(double x) const {
  switch (kind_) {
    case Kind::xlogx: return std::log(x) + 1.0;
    case Kind::neglog: return -1.0 / x;
    case Kind::identity: return 1.0;
    default: {
      const double e = exponent();
      return e * std::pow(x, e - 1.0) / divisor();
    }
  }
}

double CurvedFunction::d2(double x) const {
  switch (kind_) {
    case Kind::xlogx: return 1.0 / x;
    case Kind::neglog: return 1.0 / (x * x);
    case Kind::identity: return 0.0;
    default: {
      const double e = exponent();
      return e * (e - 1.0) * std::pow(x, e - 2.0) / divisor();
    }
  }
}

bool CurvedFunction::strictly_convex_on(double lo, double hi) const {
  return holds_on_grid(lo, hi, [this](double x) { return d2(x) > 0.0; });
}

bool CurvedFunction::strictly_increasing_on(double lo, double hi) const {
  return holds_on_grid(lo, hi, [this](double x) { return d1(x) > 0.0; });
}

bool CurvedFunction::positive_on(double lo, double hi) const {
  return holds_on_grid(lo, hi, [this](double x) { return value(x) > 0.0; });
}

}  // namespace scorekit
