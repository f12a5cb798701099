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

// Dense complex matrices, projections and projection-valued measures.
//
// Every approximate comparison uses the entrywise max-norm against an explicit
// tolerance. Matrices are immutable once built.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeff/errors.hpp"

namespace qeff {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

/// Square d x d complex matrix, row-major, d >= 1.
class Matrix {
 public:
  explicit Matrix(std::size_t dim) : Matrix(dim, std::vector<Complex>(dim * dim)) {}

  Matrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0) throw InvalidInput("matrix dimension must be positive");
    if (entries_.size() != dim_ * dim_)
      throw DimensionMismatch("matrix of dimension " + std::to_string(dim_) + " needs " +
                              std::to_string(dim_ * dim_) + " entries, got " +
                              std::to_string(entries_.size()));
    for (const Complex& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidInput("matrix entries must be finite");
  }

  Matrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : Matrix(rows.size(), flatten(rows)) {}

  static Matrix identity(std::size_t dim) {
    std::vector<Complex> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
    return Matrix(dim, std::move(e));
  }

  static Matrix zero(std::size_t dim) { return Matrix(dim); }

  static Matrix diagonal(std::span<const Complex> diag) {
    const std::size_t n = diag.size();
    std::vector<Complex> e(n * n);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
    return Matrix(n, std::move(e));
  }

  static Matrix diagonal(std::initializer_list<Complex> diag) {
    return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
  }

  std::size_t dim() const noexcept { return dim_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  static std::vector<Complex> flatten(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::vector<Complex> out;
    out.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw DimensionMismatch("matrix literal is not square");
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }

  std::size_t dim_;
  std::vector<Complex> entries_;
};

namespace detail {

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
}

template <class F>
Matrix zip_entries(const Matrix& a, const Matrix& b, const char* op, F f) {
  require_same_dim(a, b, op);
  std::vector<Complex> out(a.entries().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(a.entries()[k], b.entries()[k]);
  return Matrix(a.dim(), std::move(out));
}

}  // namespace detail

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  return detail::zip_entries(a, b, "add", std::plus<>{});
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  return detail::zip_entries(a, b, "subtract", std::minus<>{});
}

inline Matrix operator*(Complex s, const Matrix& a) {
  std::vector<Complex> out(a.entries().begin(), a.entries().end());
  for (Complex& z : out) z *= s;
  return Matrix(a.dim(), std::move(out));
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b, "matmul");
  const std::size_t n = a.dim();
  std::vector<Complex> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aik * b(k, j);
    }
  return Matrix(n, std::move(out));
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

/// Conjugate transpose.
inline Matrix adjoint(const Matrix& a) {
  const std::size_t n = a.dim();
  std::vector<Complex> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * n + i] = std::conj(a(i, j));
  return Matrix(n, std::move(out));
}

inline Matrix transpose(const Matrix& a) {
  const std::size_t n = a.dim();
  std::vector<Complex> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * n + i] = a(i, j);
  return Matrix(n, std::move(out));
}

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.dim(), m = b.dim(), nm = n * m;
  std::vector<Complex> out(nm * nm);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) out[(i * m + k) * nm + (j * m + l)] = aij * b(k, l);
    }
  return Matrix(nm, std::move(out));
}

inline Complex trace(const Matrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

inline double max_norm(const Matrix& a) {
  double m = 0.0;
  for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline double max_diff(const Matrix& a, const Matrix& b) {
  detail::require_same_dim(a, b, "max_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol = kDefaultTol) {
  return a.dim() == b.dim() && max_diff(a, b) <= tol;
}

inline bool is_zero(const Matrix& a, double tol = kDefaultTol) { return max_norm(a) <= tol; }

/// Largest of the self-adjointness and idempotence residuals.
inline double projection_residual(const Matrix& m) {
  return std::max(max_diff(adjoint(m), m), max_diff(matmul(m, m), m));
}

inline bool is_projection(const Matrix& m, double tol = kDefaultTol) {
  return projection_residual(m) <= tol;
}

inline bool commutes(const Matrix& a, const Matrix& b, double tol = kDefaultTol) {
  detail::require_same_dim(a, b, "commutes");
  return max_diff(matmul(a, b), matmul(b, a)) <= tol;
}

/// Projection-valued measure: one projection per labelled point, summing to the identity.
struct Pvm {
  std::vector<std::string> universe;
  std::vector<Matrix> elements;
  double tol = kDefaultTol;

  std::size_t dim() const { return elements.front().dim(); }
};

struct PvmCheck {
  std::optional<Pvm> pvm;
  std::string diagnostic;

  explicit operator bool() const noexcept { return pvm.has_value(); }
};

/// Accepts the family iff each element is a projection, the elements sum to the
/// identity and distinct elements are mutually orthogonal (within 10 * tol).
/// Throws on an empty family, a label/element count mismatch or mixed dimensions.
inline PvmCheck validate_pvm(std::vector<std::string> labels, std::vector<Matrix> elements,
                             double tol = kDefaultTol) {
  if (elements.empty()) throw InvalidInput("validate_pvm: empty family");
  if (labels.size() != elements.size())
    throw InvalidInput("validate_pvm: " + std::to_string(labels.size()) + " labels for " +
                       std::to_string(elements.size()) + " elements");
  const std::size_t d = elements.front().dim();
  for (const Matrix& m : elements)
    if (m.dim() != d) throw DimensionMismatch("validate_pvm: elements of unequal dimension");

  Matrix sum = Matrix::zero(d);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!is_projection(elements[i], tol))
      return {std::nullopt, "element '" + labels[i] + "' is not a projection"};
    sum = sum + elements[i];
  }
  if (max_diff(sum, Matrix::identity(d)) > tol)
    return {std::nullopt, "sum != identity"};
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j)
      if (max_norm(matmul(elements[i], elements[j])) > 10 * tol)
        return {std::nullopt, "elements '" + labels[i] + "' and '" + labels[j] + "' are not orthogonal"};
  return {Pvm{std::move(labels), std::move(elements), tol}, {}};
}

}  // namespace qeff
