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

#include "qeff/quantum_games.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "graph_enum.hpp"
#include "qeff/errors.hpp"
#include "qeff/random.hpp"

namespace qeff {
namespace {

// psi* (A (x) B) psi via the explicit Kronecker product.
Complex expectation_reference(const StateVector& psi, const Matrix& a, const Matrix& b) {
  const Matrix m = kron(a, b);
  Complex out{};
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) out += std::conj(psi[i]) * m(i, j) * psi[j];
  return out;
}

std::vector<Function> homomorphisms(const Graph& g, const Graph& h) {
  std::vector<Function> out;
  testing::for_each_function(g.size(), h.size(), [&](const Function& f) {
    if (is_homomorphism(g.structure(), h.structure(), f)) out.push_back(f);
  });
  return out;
}

TEST(BipartiteExpectationTest, MatchesKroneckerReference) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng = trial_rng(51, t);
    const std::size_t da = 1 + t % 3, db = 1 + (t / 3) % 3;
    StateVector psi(da * db);
    for (auto& z : psi) z = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    const Matrix a = random_complex_matrix(da, rng), b = random_complex_matrix(db, rng);
    EXPECT_LE(std::abs(bipartite_expectation(psi, da, db, a, b) - expectation_reference(psi, a, b)), 1e-12);
  }
}

TEST(VerifyQhomTest, IdentityOnK3) {
  const Graph k3 = complete_graph(3);
  EXPECT_TRUE(verify_quantum_homomorphism(qhom_from_classical(k3, k3, {0, 1, 2}, 1)));
}

TEST(VerifyQhomTest, AllIdentitiesFailConditionTwo) {
  const Graph k2 = complete_graph(2);
  const QuantumHomomorphism q{k2, k2, 2, std::vector<Matrix>(4, Matrix::identity(2))};
  const GameCheck c = verify_quantum_homomorphism(q);
  ASSERT_FALSE(c);
  EXPECT_EQ(c.failure->condition, 2);
}

TEST(VerifyQhomTest, NonProjectionFailsConditionOne) {
  const Graph k2 = complete_graph(2);
  std::vector<Matrix> family{Matrix{{1.0, 1.0}, {0.0, 1.0}}, Matrix{{0.0, -1.0}, {0.0, 0.0}}, Matrix::zero(2),
                             Matrix::identity(2)};
  const GameCheck c = verify_quantum_homomorphism({k2, k2, 2, family});
  ASSERT_FALSE(c);
  EXPECT_EQ(c.failure->condition, 1);
}

TEST(VerifyQhomTest, BlockConstructionFromTwoColorings) {
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  const auto homs = homomorphisms(c5, k3);
  ASSERT_EQ(homs.size(), 30u);
  const QuantumHomomorphism q = qhom_block_diagonal(c5, k3, {homs[0], homs[7]});
  EXPECT_EQ(q.grade, 2u);
  for (Point v = 0; v < 5; ++v)
    for (Point w = 0; w < 3; ++w)
      EXPECT_EQ(q.at(v, w), Matrix::diagonal({homs[0][v] == w ? 1.0 : 0.0, homs[7][v] == w ? 1.0 : 0.0}));
  EXPECT_TRUE(verify_quantum_homomorphism(q));
}

TEST(VerifyQhomTest, ShapeErrors) {
  const Graph k2 = complete_graph(2);
  EXPECT_THROW(verify_quantum_homomorphism({k2, k2, 1, std::vector<Matrix>(3, Matrix::identity(1))}), InvalidInput);
  EXPECT_THROW(verify_quantum_homomorphism({k2, k2, 1, std::vector<Matrix>(4, Matrix::identity(2))}), DimensionMismatch);
}

TEST(VerifyQhomTest, OrthogonalityViolationFailsConditionThree) {
  // Rows resolve the identity but an edge is sent to a non-edge with overlapping support.
  const Graph k2 = complete_graph(2), k2bar = Graph::from_index_edges(2, {});
  const QuantumHomomorphism q = {k2, k2bar, 1, {Matrix::identity(1), Matrix::zero(1), Matrix::identity(1), Matrix::zero(1)}};
  const GameCheck c = verify_quantum_homomorphism(q);
  ASSERT_FALSE(c);
  EXPECT_EQ(c.failure->condition, 3);
}

TEST(QhomFromClassicalTest, Examples) {
  const Graph k2 = complete_graph(2);
  const QuantumHomomorphism q = qhom_from_classical(k2, k2, {0, 1}, 1);
  EXPECT_EQ(q.at(0, 0), Matrix::identity(1));
  EXPECT_EQ(q.at(1, 1), Matrix::identity(1));
  EXPECT_EQ(q.at(0, 1), Matrix::zero(1));
  EXPECT_EQ(q.at(1, 0), Matrix::zero(1));
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  for (const Function& f : homomorphisms(c5, k3)) EXPECT_TRUE(verify_quantum_homomorphism(qhom_from_classical(c5, k3, f, 2)));
  EXPECT_THROW(qhom_from_classical(k2, k2, {0, 0}, 1), InvalidInput);
}

TEST(VerifyQhomTest, GradeOneAgreesWithClassical) {
  const auto graphs = testing::graphs_up_to_iso(3);
  for (const Graph& g : graphs)
    for (const Graph& h : graphs)
      testing::for_each_function(g.size(), h.size(), [&](const Function& f) {
        std::vector<Matrix> family(g.size() * h.size(), Matrix::zero(1));
        for (Point v = 0; v < g.size(); ++v) family[v * h.size() + f[v]] = Matrix::identity(1);
        EXPECT_EQ(bool(verify_quantum_homomorphism({g, h, 1, family})),
                  bool(is_homomorphism(g.structure(), h.structure(), f)));
      });
}

TEST(StrategyTest, FromClassicalGradeOneIsDeterministic) {
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  const Function f = homomorphisms(c5, k3).front();
  const PerfectStrategy s = strategy_from_qhom(qhom_from_classical(c5, k3, f, 1));
  ASSERT_EQ(s.state.size(), 1u);
  EXPECT_EQ(s.state[0], Complex(1.0));
  for (Point v = 0; v < 5; ++v)
    for (Point w = 0; w < 3; ++w) EXPECT_EQ(s.alice_at(v, w)(0, 0), Complex(f[v] == w ? 1.0 : 0.0));
  EXPECT_TRUE(verify_perfect_strategy(s));
}

TEST(StrategyTest, RoundTripOnRandomConjugatedBlocks) {
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  const auto homs = homomorphisms(c5, k3);
  for (std::uint64_t t = 0; t < 40; ++t) {
    Rng rng = trial_rng(52, t);
    const std::size_t d = 1 + t % 3;
    std::vector<Function> pick;
    for (std::size_t i = 0; i < d; ++i) pick.push_back(homs[uniform_index(rng, homs.size())]);
    const QuantumHomomorphism q = conjugate(qhom_block_diagonal(c5, k3, pick), random_unitary(d, rng));
    ASSERT_TRUE(verify_quantum_homomorphism(q));
    const PerfectStrategy s = strategy_from_qhom(q);
    EXPECT_NEAR(state_norm(s.state), 1.0, 1e-12);
    EXPECT_TRUE(verify_perfect_strategy(s));
    EXPECT_TRUE(strategy_is_projective(s));
    Rng qrng = trial_rng(53, t);
    QuestionDistribution qd{5, random_probabilities(25, qrng)};
    EXPECT_NEAR(evaluate_game(s, qd).win_probability, 1.0, 1e-9);
  }
}

TEST(StrategyTest, RejectsUnverifiedQhom) {
  const Graph k2 = complete_graph(2);
  EXPECT_THROW(strategy_from_qhom({k2, k2, 1, std::vector<Matrix>(4, Matrix::identity(1))}), InvalidInput);
}

TEST(VerifyStrategyTest, RowSumFailureIsConditionOne) {
  const Graph k2 = complete_graph(2);
  PerfectStrategy s = deterministic_strategy(k2, k2, {0, 1}, {0, 1});
  s.alice[0] = Matrix::zero(1);
  const GameCheck c = verify_perfect_strategy(s);
  ASSERT_FALSE(c);
  EXPECT_EQ(c.failure->condition, 1);
}

TEST(VerifyStrategyTest, DifferentHomomorphismsFailConditionTwo) {
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  const auto homs = homomorphisms(c5, k3);
  const Function& f = homs[0];
  const Function& g = homs[1];
  const PerfectStrategy s = deterministic_strategy(c5, k3, f, g);
  const GameCheck c = verify_perfect_strategy(s);
  ASSERT_FALSE(c);
  EXPECT_EQ(c.failure->condition, 2);
  const Point v = c.failure->indices[0];
  EXPECT_NE(f[v], g[v]);
  // The witness correlation really is one: both players answer deterministically.
  EXPECT_NEAR(std::abs(expectation_reference(s.state, s.alice_at(v, f[v]), s.bob_at(v, g[v]))), 1.0, 1e-12);
}

TEST(VerifyStrategyTest, ProjectivityIsNotRequired) {
  // One question, two isolated answers; the weights 1/2 on e1 never fire on psi = e0 (x) e0.
  const Graph one = Graph::from_index_edges(1, {}), two = Graph::from_index_edges(2, {});
  const Matrix e0 = Matrix::diagonal({1.0, 0.5}), e1 = Matrix::diagonal({0.0, 0.5});
  const PerfectStrategy s{one, two, {1.0, 0.0, 0.0, 0.0}, 2, 2, {e0, e1}, {e0, e1}};
  EXPECT_FALSE(strategy_is_projective(s));
  EXPECT_TRUE(verify_perfect_strategy(s));
}

TEST(VerifyStrategyTest, NonProjectiveDisagreementFailsConditionTwo) {
  const Graph one = Graph::from_index_edges(1, {}), two = Graph::from_index_edges(2, {});
  const Matrix half = Matrix::diagonal({0.5});
  const PerfectStrategy s{one, two, {1.0}, 1, 1, {half, half}, {half, half}};
  EXPECT_FALSE(strategy_is_projective(s));
  const GameCheck c = verify_perfect_strategy(s);
  ASSERT_FALSE(c);
  EXPECT_EQ(c.failure->condition, 2);
}

TEST(GameTest, K2ToK1HasValueOneHalf) {
  const Graph k2 = complete_graph(2), k1 = complete_graph(1);
  const GameEvaluation e = evaluate_game(deterministic_strategy(k2, k1, {0, 0}, {0, 0}), uniform_questions(2));
  EXPECT_DOUBLE_EQ(e.win_probability, 0.5);
  EXPECT_DOUBLE_EQ(e.p(0, 0, 0, 1), 1.0);
}

TEST(GameTest, CorrelationTableInvariants) {
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  const auto homs = homomorphisms(c5, k3);
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng = trial_rng(54, t);
    const std::size_t d = 2;
    std::vector<Function> pick{homs[uniform_index(rng, homs.size())], homs[uniform_index(rng, homs.size())]};
    const QuantumHomomorphism q = conjugate(qhom_block_diagonal(c5, k3, pick), random_unitary(d, rng));
    PerfectStrategy s = strategy_from_qhom(q);
    // Scramble Bob's side so the strategy is no longer perfect.
    const Matrix u = random_unitary(d, rng);
    for (Matrix& m : s.bob) m = matmul(matmul(u, m), adjoint(u));
    const GameEvaluation e = evaluate_game(s, uniform_questions(5));
    for (Point v1 = 0; v1 < 5; ++v1)
      for (Point v2 = 0; v2 < 5; ++v2) {
        double row = 0.0;
        for (Point w1 = 0; w1 < 3; ++w1)
          for (Point w2 = 0; w2 < 3; ++w2) {
            const double p = e.p(w1, w2, v1, v2);
            EXPECT_GE(p, -1e-9);
            EXPECT_LE(p, 1.0 + 1e-9);
            EXPECT_NEAR(p, expectation_reference(s.state, s.alice_at(v1, w1), s.bob_at(v2, w2)).real(), 1e-12);
            row += p;
          }
        EXPECT_NEAR(row, 1.0, 1e-9);
      }
    EXPECT_LE(e.win_probability, 1.0 + 1e-9);
  }
}

TEST(GameTest, ClassicalStrategiesWinUnderEveryQuestionDistribution) {
  const Graph c5 = cycle_graph(5), k3 = complete_graph(3);
  const auto homs = homomorphisms(c5, k3);
  for (std::uint64_t t = 0; t < 30; ++t) {
    Rng rng = trial_rng(55, t);
    const PerfectStrategy s = strategy_from_qhom(qhom_from_classical(c5, k3, homs[t], 1 + t % 2));
    EXPECT_NEAR(evaluate_game(s, {5, random_probabilities(25, rng)}).win_probability, 1.0, 1e-9);
  }
}

TEST(GameTest, MalformedInputsThrow) {
  const Graph k2 = complete_graph(2), k1 = complete_graph(1);
  const PerfectStrategy s = deterministic_strategy(k2, k1, {0, 0}, {0, 0});
  EXPECT_THROW(evaluate_game(s, {2, {0.5, 0.5, 0.5, 0.0}}), InvalidInput);
  EXPECT_THROW(evaluate_game(s, uniform_questions(3)), InvalidInput);
  PerfectStrategy bad = s;
  bad.state = {2.0};
  EXPECT_THROW(evaluate_game(bad, uniform_questions(2)), InvalidInput);
}

}  // namespace
}  // namespace qeff
