// Copyright 2026 The qbend Authors
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

namespace qbend {

/// Base class for all qbend errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input document (bad JSON, missing keys, wrong types).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// Vector/matrix shapes do not agree.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A numeric value is out of domain (non-finite entry, bad tolerance, ...).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& what) : Error(what) {}
};

/// Exhaustive enumeration guard tripped (too many binaries to enumerate).
class TooLargeError : public Error {
 public:
  explicit TooLargeError(const std::string& what) : Error(what) {}
};

/// The LP machinery ran out of safeguards (cycling, iteration cap).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// A penalized constraint cannot be satisfied by any binary assignment.
class InfeasibleConstraintError : public Error {
 public:
  explicit InfeasibleConstraintError(const std::string& what) : Error(what) {}
};

/// Invalid solver/sampler configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace qbend
