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

// Partial semirings carrying the weights of finitely supported distributions.
//
// Three instances: Booleans (1 + 1 undefined), the unit interval (x + y defined
// when x + y <= 1) and projections (p + q defined when p q = 0). Each instance
// also supplies a `tensor` operation used when weights from independent
// registers are combined; for scalars it coincides with `mul`, for projections
// it is the Kronecker product and grades multiply.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qeff/errors.hpp"
#include "qeff/linalg.hpp"

namespace qeff {

template <class S>
concept PartialSemiring = requires(const S& s, const typename S::value_type& a, std::size_t grade, bool b) {
  typename S::value_type;
  { S::kScalar } -> std::convertible_to<bool>;
  { s.name() } -> std::convertible_to<std::string_view>;
  { s.tol() } -> std::convertible_to<double>;
  { s.zero(grade) } -> std::same_as<typename S::value_type>;
  { s.one(grade) } -> std::same_as<typename S::value_type>;
  { s.grade_of(a) } -> std::same_as<std::size_t>;
  { s.try_add(a, a) } -> std::same_as<std::optional<typename S::value_type>>;
  { s.mul(a, a) } -> std::same_as<typename S::value_type>;
  { s.tensor(a, a) } -> std::same_as<typename S::value_type>;
  { s.is_zero(a) } -> std::same_as<bool>;
  { s.is_element(a) } -> std::same_as<bool>;
  { s.distance(a, a) } -> std::same_as<double>;
  { s.commute(a, a) } -> std::same_as<bool>;
  { s.from_bool(b, grade) } -> std::same_as<typename S::value_type>;
  { s.normalize(a, a) } -> std::same_as<typename S::value_type>;
};

namespace detail {

inline void require_scalar_grade(std::size_t grade, std::string_view instance) {
  if (grade != 1)
    throw InvalidInput(std::string(instance) + " weights only exist at grade 1, got grade " +
                       std::to_string(grade));
}

}  // namespace detail

/// {0, 1} with partial addition: 1 + 1 is undefined.
class BooleanSemiring {
 public:
  using value_type = bool;
  static constexpr bool kScalar = true;

  std::string_view name() const { return "bool"; }
  double tol() const { return 0.0; }

  bool zero(std::size_t grade) const { return detail::require_scalar_grade(grade, name()), false; }
  bool one(std::size_t grade) const { return detail::require_scalar_grade(grade, name()), true; }
  std::size_t grade_of(bool) const { return 1; }

  std::optional<bool> try_add(bool a, bool b) const {
    if (a && b) return std::nullopt;
    return a || b;
  }
  bool mul(bool a, bool b) const { return a && b; }
  bool tensor(bool a, bool b) const { return a && b; }

  bool is_zero(bool a) const { return !a; }
  bool is_element(bool) const { return true; }
  double distance(bool a, bool b) const { return a == b ? 0.0 : 1.0; }
  bool commute(bool, bool) const { return true; }
  bool from_bool(bool b, std::size_t grade) const {
    return detail::require_scalar_grade(grade, name()), b;
  }
  // Nonzero support is 1, so normalization is the identity.
  bool normalize(bool term, bool) const { return term; }
};

/// [0, 1] with x + y defined when x + y <= 1 (up to tol).
class UnitIntervalSemiring {
 public:
  using value_type = double;
  static constexpr bool kScalar = true;

  explicit UnitIntervalSemiring(double tol = kDefaultTol) : tol_(tol) {}

  std::string_view name() const { return "prob"; }
  double tol() const { return tol_; }

  double zero(std::size_t grade) const { return detail::require_scalar_grade(grade, name()), 0.0; }
  double one(std::size_t grade) const { return detail::require_scalar_grade(grade, name()), 1.0; }
  std::size_t grade_of(double) const { return 1; }

  std::optional<double> try_add(double a, double b) const {
    const double s = a + b;
    if (s > 1.0 + tol_) return std::nullopt;
    return s;
  }
  double mul(double a, double b) const { return a * b; }
  double tensor(double a, double b) const { return a * b; }

  bool is_zero(double a) const { return std::abs(a) <= tol_; }
  bool is_element(double a) const { return std::isfinite(a) && a >= -tol_ && a <= 1.0 + tol_; }
  double distance(double a, double b) const { return std::abs(a - b); }
  bool commute(double, double) const { return true; }
  double from_bool(bool b, std::size_t grade) const {
    return detail::require_scalar_grade(grade, name()), b ? 1.0 : 0.0;
  }
  double normalize(double term, double support) const { return term / support; }

 private:
  double tol_;
};

/// Proj(d) for every d at once: the grade of an element is its matrix dimension.
/// p + q is defined when |p q|_max <= tol; multiplication is the matrix product.
class ProjectionSemiring {
 public:
  using value_type = Matrix;
  static constexpr bool kScalar = false;

  explicit ProjectionSemiring(double tol = kDefaultTol) : tol_(tol) {}

  std::string_view name() const { return "proj"; }
  double tol() const { return tol_; }

  Matrix zero(std::size_t grade) const { return Matrix::zero(grade); }
  Matrix one(std::size_t grade) const { return Matrix::identity(grade); }
  std::size_t grade_of(const Matrix& a) const { return a.dim(); }

  std::optional<Matrix> try_add(const Matrix& a, const Matrix& b) const {
    detail::require_same_dim(a, b, "projection add");
    if (max_norm(matmul(a, b)) > tol_) return std::nullopt;
    return a + b;
  }
  Matrix mul(const Matrix& a, const Matrix& b) const { return matmul(a, b); }
  Matrix tensor(const Matrix& a, const Matrix& b) const { return kron(a, b); }

  bool is_zero(const Matrix& a) const { return qeff::is_zero(a, tol_); }
  bool is_element(const Matrix& a) const { return is_projection(a, tol_); }
  double distance(const Matrix& a, const Matrix& b) const {
    if (a.dim() != b.dim()) return INFINITY;
    return max_diff(a, b);
  }
  bool commute(const Matrix& a, const Matrix& b) const { return commutes(a, b, tol_); }
  Matrix from_bool(bool b, std::size_t grade) const {
    return b ? Matrix::identity(grade) : Matrix::zero(grade);
  }
  // Conditioning keeps the term and reads it relative to its support projection.
  Matrix normalize(const Matrix& term, const Matrix&) const { return term; }

 private:
  double tol_;
};

static_assert(PartialSemiring<BooleanSemiring>);
static_assert(PartialSemiring<UnitIntervalSemiring>);
static_assert(PartialSemiring<ProjectionSemiring>);

/// Adds a sequence of weights, returning nullopt as soon as a partial sum is undefined.
template <PartialSemiring S, class Range>
std::optional<typename S::value_type> try_sum(const S& s, const Range& values, std::size_t grade) {
  std::optional<typename S::value_type> acc = s.zero(grade);
  for (const auto& v : values) {
    acc = s.try_add(*acc, v);
    if (!acc) return std::nullopt;
  }
  return acc;
}

}  // namespace qeff
