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

#include <stdexcept>
#include <string>

namespace scorekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative weights, boundary distributions where interiority is required).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rule, family or function configuration violates its requirements
/// (beta <= 1, a non-convex generator, an unknown registry name).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to converge or produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace scorekit
