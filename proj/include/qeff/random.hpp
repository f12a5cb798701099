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

// Seeded generators for matrices, projection-valued measures and S-valued
// distributions. Every trial derives its own engine from (seed, trial index), so
// results do not depend on the order in which trials run.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qeff/kleisli.hpp"
#include "qeff/linalg.hpp"
#include "qeff/partial_semiring.hpp"

namespace qeff {

using Rng = std::mt19937_64;

inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline Matrix random_complex_matrix(std::size_t d, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> e(d * d);
  for (Complex& z : e) z = {g(rng), g(rng)};
  return Matrix(d, std::move(e));
}

inline Matrix random_hermitian(std::size_t d, Rng& rng) {
  Matrix a = random_complex_matrix(d, rng);
  Matrix h = a + adjoint(a);
  return Complex(1.0 / max_norm(h)) * h;
}

/// Columns of a random complex matrix, orthonormalized by modified Gram-Schmidt.
inline Matrix random_unitary(std::size_t d, Rng& rng) {
  Matrix a = random_complex_matrix(d, rng);
  std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(d));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) cols[j][i] = a(i, j);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot{};
      for (std::size_t i = 0; i < d; ++i) dot += std::conj(cols[k][i]) * cols[j][i];
      for (std::size_t i = 0; i < d; ++i) cols[j][i] -= dot * cols[k][i];
    }
    double norm = 0.0;
    for (const Complex& z : cols[j]) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (Complex& z : cols[j]) z /= norm;
  }
  std::vector<Complex> e(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) e[i * d + j] = cols[j][i];
  return Matrix(d, std::move(e));
}

/// Projector onto the span of the selected columns of a unitary.
inline Matrix column_projector(const Matrix& u, const std::vector<std::size_t>& columns) {
  const std::size_t d = u.dim();
  std::vector<Complex> e(d * d);
  for (std::size_t c : columns)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) e[i * d + j] += u(i, c) * std::conj(u(j, c));
  return Matrix(d, std::move(e));
}

/// Random PVM over n points at dimension d: the columns of a random unitary are
/// dealt out to the points and each point gets the projector onto its columns.
inline std::vector<Matrix> random_pvm(std::size_t n, std::size_t d, Rng& rng) {
  Matrix u = random_unitary(d, rng);
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t c = 0; c < d; ++c) groups[uniform_index(rng, n)].push_back(c);
  std::vector<Matrix> out;
  out.reserve(n);
  for (const auto& g : groups) out.push_back(column_projector(u, g));
  return out;
}

/// Random probability vector; roughly a third of the points get weight zero.
inline std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> ex;
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = uniform01(rng) < 0.33 ? 0.0 : ex(rng);
    total += x;
  }
  if (total == 0.0) {
    w[uniform_index(rng, n)] = 1.0;
    return w;
  }
  for (double& x : w) x /= total;
  return w;
}

template <PartialSemiring S>
Distribution<S> from_dense(const S& s, const std::vector<typename S::value_type>& w, std::size_t grade) {
  typename Distribution<S>::Weights weights;
  for (Point x = 0; x < w.size(); ++x) weights.emplace_back(x, w[x]);
  return Distribution<S>::make(s, w.size(), grade, std::move(weights));
}

inline Distribution<BooleanSemiring> random_distribution(const BooleanSemiring& s, std::size_t n, std::size_t,
                                                         Rng& rng) {
  return unit(s, uniform_index(rng, n), n);
}

inline Distribution<UnitIntervalSemiring> random_distribution(const UnitIntervalSemiring& s, std::size_t n,
                                                              std::size_t, Rng& rng) {
  return from_dense(s, random_probabilities(n, rng), 1);
}

inline Distribution<ProjectionSemiring> random_distribution(const ProjectionSemiring& s, std::size_t n,
                                                            std::size_t grade, Rng& rng) {
  return from_dense(s, random_pvm(n, grade, rng), grade);
}

/// Predicate weights: random bits, uniform fuzzy values, or projections that are
/// diagonal in one common random basis (hence pairwise commuting).
inline std::vector<bool> random_predicate_values(const BooleanSemiring&, std::size_t n, std::size_t, Rng& rng) {
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = uniform01(rng) < 0.5;
  return out;
}

inline std::vector<double> random_predicate_values(const UnitIntervalSemiring&, std::size_t n, std::size_t,
                                                   Rng& rng) {
  std::vector<double> out(n);
  for (double& x : out) x = uniform01(rng);
  return out;
}

inline std::vector<Matrix> random_predicate_values(const ProjectionSemiring&, std::size_t n, std::size_t grade,
                                                   Rng& rng) {
  Matrix u = random_unitary(grade, rng);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < grade; ++c)
      if (uniform01(rng) < 0.5) cols.push_back(c);
    out.push_back(column_projector(u, cols));
  }
  return out;
}

template <PartialSemiring S>
KleisliMap<S> random_kleisli_map(const S& s, const Structure& dom, const Structure& cod, std::size_t grade,
                                 Rng& rng) {
  std::vector<Distribution<S>> rows;
  for (std::size_t a = 0; a < dom.size(); ++a) rows.push_back(random_distribution(s, cod.size(), grade, rng));
  return KleisliMap<S>(s, dom, cod, grade, std::move(rows));
}

/// Moves a single weight by `magnitude`: flips a bit, shifts a probability, or
/// adds a scaled random Hermitian matrix.
inline bool perturb(const BooleanSemiring&, bool v, double, Rng&) { return !v; }

inline double perturb(const UnitIntervalSemiring&, double v, double magnitude, Rng&) {
  return v + magnitude <= 1.0 ? v + magnitude : v - magnitude;
}

inline Matrix perturb(const ProjectionSemiring&, const Matrix& v, double magnitude, Rng& rng) {
  return v + Complex(magnitude) * random_hermitian(v.dim(), rng);
}

}  // namespace qeff
