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

#include "qeff/state_logic.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "qeff/errors.hpp"
#include "qeff/random.hpp"

namespace qeff {
namespace {

using Bool = BooleanSemiring;
using Prob = UnitIntervalSemiring;
using Proj = ProjectionSemiring;

const Matrix kE0 = Matrix::diagonal({1.0, 0.0});
const Matrix kE1 = Matrix::diagonal({0.0, 1.0});

const Structure& ab() {
  static const Structure s = Structure::from_labels({"a", "b"}, {{"R", {2, {{"a", "b"}}}}});
  return s;
}

Structure random_structure(std::size_t n, Rng& rng) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  Relation e{2, {}};
  for (Point i = 0; i < n; ++i)
    for (Point j = 0; j < n; ++j)
      if (uniform01(rng) < 0.4) e.tuples.insert({i, j});
  return Structure(labels, {{"E", e}});
}

template <class S>
State<S> random_state(const S& s, const Structure& a, std::size_t grade, Rng& rng) {
  return make_state(a, random_distribution(s, a.size(), grade, rng));
}

template <class S>
Predicate<S> random_predicate(const S& s, const Structure& a, std::size_t grade, Rng& rng) {
  auto v = random_predicate_values(s, a.size(), grade, rng);
  return make_predicate(s, a, grade, std::vector<typename S::value_type>(v.begin(), v.end()));
}

TEST(ValidityTest, BooleanMembership) {
  const Bool s;
  for (Point x = 0; x < 2; ++x)
    for (int mask = 0; mask < 4; ++mask) {
      const std::vector<bool> subset{bool(mask & 1), bool(mask & 2)};
      EXPECT_EQ(validity(point_state(s, ab(), x), subset_predicate(s, ab(), subset)), subset[x]);
    }
}

TEST(ValidityTest, UnitIntervalExpectedValue) {
  const Prob s;
  const auto p = make_state(ab(), Distribution<Prob>::make(s, 2, 1, {{0, 0.5}, {1, 0.5}}));
  EXPECT_DOUBLE_EQ(validity(p, make_predicate(s, ab(), 1, {1.0, 0.0})), 0.5);
}

TEST(ValidityTest, TruthPredicateGivesIdentity) {
  const Proj s;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng = trial_rng(71, t);
    const std::size_t d = 1 + t % 3, d2 = 1 + t % 2;
    const auto p = random_state(s, ab(), d, rng);
    EXPECT_LE(max_diff(validity(p, truth(s, ab(), d2)), Matrix::identity(d * d2)), 1e-12);
  }
}

TEST(ValidityTest, MismatchesThrow) {
  const Prob s;
  const auto p = point_state(s, ab(), 0);
  EXPECT_THROW(validity(p, truth(s, Structure::set({"a", "b"}))), UniverseMismatch);
  const Proj ps;
  const Matrix plus{{0.5, 0.5}, {0.5, 0.5}};
  // a and b co-occur in R, so their projections must commute.
  EXPECT_THROW(make_predicate(ps, ab(), 2, {kE0, plus}), InvalidInput);
  Predicate<Proj> bad{ps, ab(), 2, {kE0, plus}};
  EXPECT_THROW(validity(point_state(ps, ab(), 0, 2), bad), InvalidInput);
  EXPECT_NO_THROW(make_predicate(ps, Structure::set({"a", "b"}), 2, {kE0, plus}));
}

TEST(ValidityTest, ProjectionValidityIsAProjection) {
  const Proj s;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng = trial_rng(72, t);
    const Structure a = random_structure(1 + uniform_index(rng, 3), rng);
    const auto v = validity(random_state(s, a, 1 + t % 2, rng), random_predicate(s, a, 1 + (t / 2) % 2, rng));
    EXPECT_TRUE(is_projection(v, 1e-9)) << "trial " << t;
  }
}

TEST(ConditionTest, UnitIntervalBayes) {
  const Prob s;
  const auto p = make_state(ab(), Distribution<Prob>::make(s, 2, 1, {{0, 0.5}, {1, 0.5}}));
  const auto c = condition(p, make_predicate(s, ab(), 1, {1.0, 0.5}));
  EXPECT_DOUBLE_EQ(c.support, 0.75);
  EXPECT_NEAR(c.terms[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.terms[1], 1.0 / 3.0, 1e-15);
  const auto sharp = conditioned_state(s, condition(p, make_predicate(s, ab(), 1, {1.0, 0.0})));
  EXPECT_DOUBLE_EQ(sharp.distribution(0), 1.0);
  EXPECT_EQ(sharp.distribution.support().size(), 1u);
}

TEST(ConditionTest, BooleanRetainsSatisfyingPoint) {
  const Bool s;
  const auto c = condition(point_state(s, ab(), 1), subset_predicate(s, ab(), {false, true}));
  EXPECT_EQ(c.terms, (std::vector<bool>{false, true}));
  EXPECT_THROW(condition(point_state(s, ab(), 0), subset_predicate(s, ab(), {false, true})), ZeroValidity);
}

TEST(ConditionTest, ProjectionSupportRelative) {
  const Proj s;
  const auto p = make_state(ab(), Distribution<Proj>::make(s, 2, 2, {{0, kE0}, {1, kE1}}));
  const auto c = condition(p, make_predicate(s, ab(), 2, {kE0, Matrix::zero(2)}));
  const Matrix r = kron(kE0, kE0);
  EXPECT_EQ(c.grade, 4u);
  EXPECT_EQ(c.support, r);
  EXPECT_EQ(c.terms[0], r);
  EXPECT_EQ(c.terms[1], Matrix::zero(4));
  EXPECT_LE(conditioning_residual(s, c), 1e-15);
  EXPECT_THROW(condition(p, make_predicate(s, ab(), 2, {Matrix::zero(2), Matrix::zero(2)})), ZeroValidity);
}

template <class S>
class StateLogicPropertyTest : public ::testing::Test {};
using Instances = ::testing::Types<Bool, Prob, Proj>;
TYPED_TEST_SUITE(StateLogicPropertyTest, Instances);

TYPED_TEST(StateLogicPropertyTest, ConditioningResolvesSupport) {
  const TypeParam s;
  std::size_t conditioned = 0;
  for (std::uint64_t t = 0; conditioned < 100; ++t) {
    ASSERT_LT(t, 1000u);
    Rng rng = trial_rng(73, t);
    const Structure a = random_structure(1 + uniform_index(rng, 3), rng);
    const std::size_t d = TypeParam::kScalar ? 1 : 1 + t % 2, d2 = TypeParam::kScalar ? 1 : 1 + (t / 2) % 2;
    const auto p = random_state(s, a, d, rng);
    const auto q = random_predicate(s, a, d2, rng);
    if (s.is_zero(validity(p, q))) {
      EXPECT_THROW(condition(p, q), ZeroValidity);
      continue;
    }
    const auto c = condition(p, q);
    EXPECT_LE(conditioning_residual(s, c), 1e-9);
    if constexpr (TypeParam::kScalar) {
      EXPECT_NO_THROW(conditioned_state(s, c));
    }
    ++conditioned;
  }
}

TYPED_TEST(StateLogicPropertyTest, ValidityTransformerDuality) {
  const TypeParam s;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(74, t);
    const Structure x = Structure::set({"x0", "x1", "x2"}), y = Structure::set({"y0", "y1"});
    const std::size_t d = TypeParam::kScalar ? 1 : 1 + t % 2;
    const std::size_t df = TypeParam::kScalar ? 1 : 1 + (t / 2) % 2;
    const std::size_t dq = TypeParam::kScalar ? 1 : 1 + (t / 4) % 2;
    const auto p = random_state(s, x, d, rng);
    const auto f = random_kleisli_map(s, x, y, df, rng);
    const auto q = random_predicate(s, y, dq, rng);
    const auto lhs = validity(stat_transform(f, p), q);
    const auto rhs = validity(p, pred_transform(f, q));
    EXPECT_LE(s.distance(lhs, rhs), 1e-9) << "trial " << t;
  }
}

TEST(TableTest, DeterministicDataAgreesAcrossInstances) {
  const Bool b;
  const Prob p;
  const Proj q;
  for (std::uint64_t t = 0; t < 60; ++t) {
    Rng rng = trial_rng(75, t);
    const Structure a = random_structure(1 + uniform_index(rng, 4), rng);
    const Point x = uniform_index(rng, a.size());
    std::vector<bool> subset(a.size());
    for (std::size_t i = 0; i < subset.size(); ++i) subset[i] = uniform01(rng) < 0.5;
    const bool expected = subset[x];
    EXPECT_EQ(validity(point_state(b, a, x), subset_predicate(b, a, subset)), expected);
    EXPECT_EQ(sharp_value(p, validity(point_state(p, a, x), subset_predicate(p, a, subset))), expected);
    for (std::size_t d = 1; d <= 2; ++d) {
      const Matrix v = validity(point_state(q, a, x, d), subset_predicate(q, a, subset, d));
      EXPECT_TRUE(is_projection(v, 1e-9));
      EXPECT_EQ(sharp_value(q, v), expected);
    }
  }
}

TEST(StatTransformTest, Examples) {
  const Proj s;
  Rng rng = trial_rng(76, 0);
  const Structure x = Structure::set({"x0", "x1", "x2"}), y = Structure::set({"y0", "y1"});
  const auto p = random_state(s, x, 2, rng);
  EXPECT_LE(distance(stat_transform(unit_map(s, x), p).distribution, p.distribution), 1e-15);
  const StructureMap g = StructureMap::make(x, y, {1, 0, 1});
  EXPECT_LE(distance(stat_transform(lift(s, g), p).distribution, pushforward(g, p.distribution)), 1e-15);
  const auto f = random_kleisli_map(s, x, y, 2, rng);
  const auto out = stat_transform(f, p);
  EXPECT_EQ(out.grade(), 4u);
  EXPECT_TRUE(out.distribution.check());
  const KleisliMap<Proj> as_map(s, terminal(x.signature()), x, 2, {p.distribution});
  EXPECT_LE(distance(out.distribution, graded_compose(as_map, f)(0)), 0.0);
  EXPECT_THROW(stat_transform(f, random_state(s, y, 2, rng)), UniverseMismatch);
}

TEST(PredTransformTest, Examples) {
  const Proj s;
  Rng rng = trial_rng(77, 0);
  const Structure x = Structure::set({"x0", "x1", "x2"}), y = Structure::set({"y0", "y1"});
  const auto f = random_kleisli_map(s, x, y, 2, rng);
  const auto t = pred_transform(f, truth(s, y, 2));
  EXPECT_EQ(t.grade, 4u);
  for (const Matrix& m : t.values) EXPECT_LE(max_diff(m, Matrix::identity(4)), 1e-12);
  const StructureMap g = StructureMap::make(x, y, {1, 0, 1});
  const auto q = random_predicate(s, y, 2, rng);
  const auto pulled = pred_transform(lift(s, g), q);
  for (Point i = 0; i < x.size(); ++i) EXPECT_LE(max_diff(pulled(i), q(g.image[i])), 1e-15);
  EXPECT_TRUE(check_predicate(pulled));
}

TEST(PredTransformTest, HomomorphismsPreserveCommutation) {
  const Proj s;
  const Structure k2 = complete_graph(2).structure(), k3 = complete_graph(3).structure();
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng = trial_rng(78, t);
    Function f{uniform_index(rng, 3), 0};
    f[1] = (f[0] + 1 + uniform_index(rng, 2)) % 3;
    const auto q = random_predicate(s, k3, 2, rng);
    EXPECT_TRUE(check_predicate(pred_transform(lift(s, StructureMap::make(k2, k3, f)), q)));
  }
}

}  // namespace
}  // namespace qeff
