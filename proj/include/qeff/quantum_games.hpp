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

// Quantum graph homomorphisms, quantum perfect strategies for the homomorphism
// game, and evaluation of game correlations.
//
// A quantum homomorphism G -> H is a family E[v][w] of d x d projections with
// each row summing to the identity and E[v][w] E[v'][w'] = 0 whenever the pair
// (v, w), (v', w') is inconsistent: v = v' but w != w', or v ~ v' but w !~ w'.
// A perfect strategy is a shared state psi with measurement families for Alice
// and Bob whose correlations never produce a losing answer pair.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qeff/errors.hpp"
#include "qeff/linalg.hpp"
#include "qeff/rstruct.hpp"

namespace qeff {

using StateVector = std::vector<Complex>;

/// Family of matrices indexed by (v, w) in V(G) x V(H), stored at v * |H| + w.
struct QuantumHomomorphism {
  Graph source;
  Graph target;
  std::size_t grade = 1;
  std::vector<Matrix> family;
  double tol = kDefaultTol;

  const Matrix& at(Point v, Point w) const { return family.at(v * target.size() + w); }
};

struct PerfectStrategy {
  Graph source;
  Graph target;
  StateVector state;  // index i * dim_b + k
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;
  std::vector<Matrix> alice;  // v * |H| + w
  std::vector<Matrix> bob;
  double tol = kDefaultTol;

  const Matrix& alice_at(Point v, Point w) const { return alice.at(v * target.size() + w); }
  const Matrix& bob_at(Point v, Point w) const { return bob.at(v * target.size() + w); }
};

/// Which numbered condition failed, at which indices, by how much.
struct GameWitness {
  int condition = 0;
  std::vector<Point> indices;
  double residual = 0.0;
  std::string message;
};

struct GameCheck {
  std::optional<GameWitness> failure;

  explicit operator bool() const noexcept { return !failure.has_value(); }
};

namespace detail {

inline std::string vw(const Graph& g, const Graph& h, Point v, Point w) {
  return "(" + g.structure().label(v) + "," + h.structure().label(w) + ")";
}

inline void require_family_shape(const std::vector<Matrix>& family, const Graph& g, const Graph& h, std::size_t d,
                                 const char* who) {
  if (family.size() != g.size() * h.size())
    throw InvalidInput(std::string(who) + ": family has " + std::to_string(family.size()) + " entries, expected " +
                       std::to_string(g.size() * h.size()));
  for (const Matrix& m : family)
    if (m.dim() != d)
      throw DimensionMismatch(std::string(who) + ": matrix of dimension " + std::to_string(m.dim()) +
                              " in a family of dimension " + std::to_string(d));
}

}  // namespace detail

inline GameCheck verify_quantum_homomorphism(const QuantumHomomorphism& q) {
  const Graph& g = q.source;
  const Graph& h = q.target;
  detail::require_family_shape(q.family, g, h, q.grade, "verify_quantum_homomorphism");
  const double tol = q.tol;

  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w)
      if (double r = projection_residual(q.at(v, w)); r > tol)
        return {GameWitness{1, {v, w}, r, "E" + detail::vw(g, h, v, w) + " is not a projection"}};

  const Matrix id = Matrix::identity(q.grade);
  for (Point v = 0; v < g.size(); ++v) {
    Matrix sum = Matrix::zero(q.grade);
    for (Point w = 0; w < h.size(); ++w) sum = sum + q.at(v, w);
    if (double r = max_diff(sum, id); r > tol)
      return {GameWitness{2, {v}, r, "row '" + g.structure().label(v) + "' does not sum to the identity"}};
  }

  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w) {
      const Matrix& e = q.at(v, w);
      if (max_norm(e) == 0.0) continue;
      for (Point v2 = 0; v2 < g.size(); ++v2)
        for (Point w2 = 0; w2 < h.size(); ++w2) {
          const bool inconsistent = (v == v2 && w != w2) || (g.adjacent(v, v2) && !h.adjacent(w, w2));
          if (!inconsistent) continue;
          const Matrix& f = q.at(v2, w2);
          if (max_norm(f) == 0.0) continue;
          if (double r = max_norm(matmul(e, f)); r > tol)
            return {GameWitness{3, {v, w, v2, w2}, r,
                                "E" + detail::vw(g, h, v, w) + " E" + detail::vw(g, h, v2, w2) + " != 0"}};
        }
    }
  return {};
}

/// E[v][w] = identity if w = f(v), else zero.
inline QuantumHomomorphism qhom_from_classical(const Graph& g, const Graph& h, const Function& f, std::size_t d,
                                               double tol = kDefaultTol) {
  if (d == 0) throw InvalidInput("qhom_from_classical: dimension must be positive");
  if (!is_homomorphism(g.structure(), h.structure(), f))
    throw InvalidInput("qhom_from_classical: the map is not a graph homomorphism");
  std::vector<Matrix> family;
  family.reserve(g.size() * h.size());
  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w) family.push_back(w == f[v] ? Matrix::identity(d) : Matrix::zero(d));
  return {g, h, d, std::move(family), tol};
}

/// Block-diagonal family from k classical homomorphisms: E[v][w] = diag(f_i(v) == w).
inline QuantumHomomorphism qhom_block_diagonal(const Graph& g, const Graph& h, const std::vector<Function>& homs,
                                               double tol = kDefaultTol) {
  if (homs.empty()) throw InvalidInput("qhom_block_diagonal: need at least one homomorphism");
  for (const Function& f : homs)
    if (!is_homomorphism(g.structure(), h.structure(), f))
      throw InvalidInput("qhom_block_diagonal: a block map is not a graph homomorphism");
  const std::size_t d = homs.size();
  std::vector<Matrix> family;
  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w) {
      std::vector<Complex> diag(d);
      for (std::size_t i = 0; i < d; ++i) diag[i] = homs[i][v] == w ? 1.0 : 0.0;
      family.push_back(Matrix::diagonal(diag));
    }
  return {g, h, d, std::move(family), tol};
}

/// U E U* applied to every member; preserves all three conditions.
inline QuantumHomomorphism conjugate(const QuantumHomomorphism& q, const Matrix& u) {
  QuantumHomomorphism out = q;
  const Matrix ua = adjoint(u);
  for (Matrix& m : out.family) m = matmul(matmul(u, m), ua);
  return out;
}

/// psi* (A (x) B) psi without materializing the Kronecker product.
inline Complex bipartite_expectation(const StateVector& psi, std::size_t dim_a, std::size_t dim_b, const Matrix& a,
                                     const Matrix& b) {
  // M = A Psi B^T with Psi the dim_a x dim_b reshaping of psi.
  std::vector<Complex> ap(dim_a * dim_b);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t l = 0; l < dim_b; ++l) ap[i * dim_b + l] += aij * psi[j * dim_b + l];
    }
  Complex out{};
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t k = 0; k < dim_b; ++k) {
      Complex m{};
      for (std::size_t l = 0; l < dim_b; ++l) m += ap[i * dim_b + l] * b(k, l);
      out += std::conj(psi[i * dim_b + k]) * m;
    }
  return out;
}

inline double state_norm(const StateVector& psi) {
  double n = 0.0;
  for (const Complex& z : psi) n += std::norm(z);
  return std::sqrt(n);
}

namespace detail {

inline void require_strategy_shape(const PerfectStrategy& s) {
  if (s.dim_a == 0 || s.dim_b == 0) throw InvalidInput("strategy: local dimensions must be positive");
  if (s.state.size() != s.dim_a * s.dim_b)
    throw DimensionMismatch("strategy: state has length " + std::to_string(s.state.size()) + ", expected " +
                            std::to_string(s.dim_a * s.dim_b));
  require_family_shape(s.alice, s.source, s.target, s.dim_a, "strategy (alice)");
  require_family_shape(s.bob, s.source, s.target, s.dim_b, "strategy (bob)");
}

// Condition (1) of a strategy: both families resolve the identity and psi is a unit vector.
inline GameCheck check_strategy_normalization(const PerfectStrategy& s) {
  if (double r = std::abs(state_norm(s.state) - 1.0); r > s.tol)
    return {GameWitness{1, {}, r, "state is not a unit vector"}};
  for (int side = 0; side < 2; ++side) {
    const auto& fam = side == 0 ? s.alice : s.bob;
    const std::size_t d = side == 0 ? s.dim_a : s.dim_b;
    const Matrix id = Matrix::identity(d);
    for (Point v = 0; v < s.source.size(); ++v) {
      Matrix sum = Matrix::zero(d);
      for (Point w = 0; w < s.target.size(); ++w) sum = sum + fam[v * s.target.size() + w];
      if (double r = max_diff(sum, id); r > s.tol)
        return {GameWitness{1, {v}, r,
                            std::string(side == 0 ? "alice" : "bob") + " row '" + s.source.structure().label(v) +
                                "' does not sum to the identity"}};
    }
  }
  return {};
}

}  // namespace detail

/// Maximally entangled state of local dimension d; Alice measures E, Bob the transposes.
inline PerfectStrategy strategy_from_qhom(const QuantumHomomorphism& q) {
  if (GameCheck c = verify_quantum_homomorphism(q); !c)
    throw InvalidInput("strategy_from_qhom: not a quantum homomorphism: " + c.failure->message);
  const std::size_t d = q.grade;
  StateVector psi(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) psi[i * d + i] = amp;
  std::vector<Matrix> bob;
  bob.reserve(q.family.size());
  for (const Matrix& m : q.family) bob.push_back(transpose(m));
  return {q.source, q.target, std::move(psi), d, d, q.family, std::move(bob), q.tol};
}

/// Deterministic classical strategy at d = 1: Alice answers f(v), Bob answers g(v).
inline PerfectStrategy deterministic_strategy(const Graph& g, const Graph& h, const Function& alice,
                                              const Function& bob, double tol = kDefaultTol) {
  if (alice.size() != g.size() || bob.size() != g.size())
    throw InvalidInput("deterministic_strategy: answer maps must be total");
  std::vector<Matrix> fa, fb;
  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w) {
      fa.push_back(Matrix::diagonal({alice[v] == w ? 1.0 : 0.0}));
      fb.push_back(Matrix::diagonal({bob[v] == w ? 1.0 : 0.0}));
    }
  return {g, h, {1.0}, 1, 1, std::move(fa), std::move(fb), tol};
}

/// Checks normalization (1), agreement on equal questions (2) and edge
/// preservation (3). Projectivity is not required; see strategy_is_projective.
inline GameCheck verify_perfect_strategy(const PerfectStrategy& s) {
  detail::require_strategy_shape(s);
  if (GameCheck c = detail::check_strategy_normalization(s); !c) return c;
  const Graph& g = s.source;
  const Graph& h = s.target;
  auto corr = [&](Point v, Point w, Point v2, Point w2) {
    return std::abs(bipartite_expectation(s.state, s.dim_a, s.dim_b, s.alice_at(v, w), s.bob_at(v2, w2)));
  };
  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w)
      for (Point w2 = 0; w2 < h.size(); ++w2)
        if (w != w2)
          if (double r = corr(v, w, v, w2); r > s.tol)
            return {GameWitness{2, {v, w, v, w2}, r,
                                "answers " + detail::vw(g, h, v, w) + " and " + detail::vw(g, h, v, w2) +
                                    " occur together"}};
  for (Point v = 0; v < g.size(); ++v)
    for (Point v2 = 0; v2 < g.size(); ++v2) {
      if (!g.adjacent(v, v2)) continue;
      for (Point w = 0; w < h.size(); ++w)
        for (Point w2 = 0; w2 < h.size(); ++w2)
          if (!h.adjacent(w, w2))
            if (double r = corr(v, w, v2, w2); r > s.tol)
              return {GameWitness{3, {v, w, v2, w2}, r,
                                  "answers " + detail::vw(g, h, v, w) + " and " + detail::vw(g, h, v2, w2) +
                                      " occur together on an edge"}};
    }
  return {};
}

inline GameCheck strategy_is_projective(const PerfectStrategy& s) {
  detail::require_strategy_shape(s);
  for (std::size_t k = 0; k < s.alice.size(); ++k) {
    if (double r = projection_residual(s.alice[k]); r > s.tol)
      return {GameWitness{0, {k / s.target.size(), k % s.target.size()}, r, "an alice matrix is not a projection"}};
    if (double r = projection_residual(s.bob[k]); r > s.tol)
      return {GameWitness{0, {k / s.target.size(), k % s.target.size()}, r, "a bob matrix is not a projection"}};
  }
  return {};
}

/// Weights over question pairs (v1, v2), stored at v1 * n + v2.
struct QuestionDistribution {
  std::size_t n = 0;
  std::vector<double> weights;
};

inline QuestionDistribution uniform_questions(std::size_t n) {
  return {n, std::vector<double>(n * n, 1.0 / static_cast<double>(n * n))};
}

/// Correlation table p(w1, w2 | v1, v2) = psi* (E[v1][w1] (x) F[v2][w2]) psi.
struct GameEvaluation {
  std::size_t questions = 0;  // |V(G)|
  std::size_t answers = 0;    // |V(H)|
  std::vector<double> correlations;
  double win_probability = 0.0;

  double p(Point w1, Point w2, Point v1, Point v2) const {
    return correlations[((v1 * questions + v2) * answers + w1) * answers + w2];
  }
};

/// The round is won iff v1 = v2 implies w1 = w2 and v1 ~ v2 implies w1 ~ w2.
inline bool wins_round(const Graph& g, const Graph& h, Point v1, Point v2, Point w1, Point w2) {
  if (v1 == v2 && w1 != w2) return false;
  if (g.adjacent(v1, v2) && !h.adjacent(w1, w2)) return false;
  return true;
}

inline GameEvaluation evaluate_game(const PerfectStrategy& s, const QuestionDistribution& questions) {
  detail::require_strategy_shape(s);
  if (GameCheck c = detail::check_strategy_normalization(s); !c)
    throw InvalidInput("evaluate_game: malformed strategy: " + c.failure->message);
  const std::size_t n = s.source.size(), m = s.target.size();
  if (questions.n != n || questions.weights.size() != n * n)
    throw InvalidInput("evaluate_game: question distribution does not cover V(G) x V(G)");
  double total = 0.0;
  for (double w : questions.weights) {
    if (!(w >= 0.0)) throw InvalidInput("evaluate_game: negative question weight");
    total += w;
  }
  if (std::abs(total - 1.0) > s.tol) throw InvalidInput("evaluate_game: question weights do not sum to 1");

  GameEvaluation out{n, m, std::vector<double>(n * n * m * m), 0.0};
  for (Point v1 = 0; v1 < n; ++v1)
    for (Point v2 = 0; v2 < n; ++v2) {
      double row = 0.0, mass = 0.0;
      for (Point w1 = 0; w1 < m; ++w1)
        for (Point w2 = 0; w2 < m; ++w2) {
          const Complex z = bipartite_expectation(s.state, s.dim_a, s.dim_b, s.alice_at(v1, w1), s.bob_at(v2, w2));
          if (std::abs(z.imag()) > s.tol || z.real() < -s.tol || z.real() > 1.0 + s.tol)
            throw InvalidInput("evaluate_game: correlation is not a probability at questions (" +
                               s.source.structure().label(v1) + "," + s.source.structure().label(v2) + ")");
          out.correlations[((v1 * n + v2) * m + w1) * m + w2] = z.real();
          row += z.real();
          if (wins_round(s.source, s.target, v1, v2, w1, w2)) mass += z.real();
        }
      if (std::abs(row - 1.0) > s.tol)
        throw InvalidInput("evaluate_game: correlations do not sum to 1 at questions (" +
                           s.source.structure().label(v1) + "," + s.source.structure().label(v2) + ")");
      out.win_probability += questions.weights[v1 * n + v2] * mass;
    }
  return out;
}

}  // namespace qeff
