// Copyright 2026 The qeffectus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qeff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed input: bad labels, empty families, out-of-range points, and so on.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Two structures (or a map and a structure) disagree on relation names or arities.
class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class UniverseMismatch : public Error {
 public:
  using Error::Error;
};

/// A partial addition that had to be defined was not.
class UndefinedSum : public Error {
 public:
  using Error::Error;
};

/// The premise of a conditional construction (e.g. a pullback mediator) fails.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(const std::string& what, std::size_t point, double residual)
      : Error(what), point_(point), residual_(residual) {}

  std::size_t point() const noexcept { return point_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t point_;
  double residual_;
};

/// A constructed mediator failed to be a distribution.
class NormalizationFailure : public Error {
 public:
  using Error::Error;
};

class ZeroValidity : public Error {
 public:
  using Error::Error;
};

/// Outcome of a check that can fail with an explanation.
struct Verdict {
  bool ok = true;
  std::string witness;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }

  explicit operator bool() const noexcept { return ok; }
};

}  // namespace qeff
