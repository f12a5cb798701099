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

// The effectus conditions, made executable for the Kleisli category of any
// S-valued distribution monad:
//
//   X + Y --(!+id)--> 1 + Y          X ----!----> 1
//     |                 |            |            |
//  (id+!)            (id+!)         k1           k1
//     v                 v            v            v
//   X + 1 --(!+id)--> 1 + 1        X + Y --(!+!)--> 1 + 1
//
// Both squares are pullbacks: mediators are built and checked against the
// recovery equations, and uniqueness is probed with adversarial candidates.
// The pair gamma1 = [[k1,k2],k2], gamma2 = [[k2,k1],k2] : (1+1)+1 -> 1+1 must
// be jointly monic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "qeff/errors.hpp"
#include "qeff/kleisli.hpp"
#include "qeff/partial_semiring.hpp"
#include "qeff/random.hpp"
#include "qeff/rstruct.hpp"

namespace qeff {

/// Objects and structural maps of both squares and of the joint-monicity pair.
struct EffectusFrame {
  Structure x, y, one;
  Coproduct x_plus_one, one_plus_y, x_plus_y, one_plus_one, three;
  StructureMap bang_x;              // X -> 1
  StructureMap bang_x_plus_id1;     // X+1 -> 1+1
  StructureMap id1_plus_bang_y;     // 1+Y -> 1+1
  StructureMap idx_plus_bang_y;     // X+Y -> X+1
  StructureMap bang_x_plus_idy;     // X+Y -> 1+Y
  StructureMap bang_x_plus_bang_y;  // X+Y -> 1+1
  StructureMap gamma1, gamma2;      // (1+1)+1 -> 1+1
};

inline EffectusFrame make_frame(const Structure& x, const Structure& y) {
  require_same_signature(x, y, "make_frame");
  Structure one = terminal(x.signature());
  Coproduct oo = coproduct(one, one);
  const StructureMap id1 = identity_map(one);
  return EffectusFrame{
      x,
      y,
      one,
      coproduct(x, one),
      coproduct(one, y),
      coproduct(x, y),
      oo,
      coproduct(oo.sum, one),
      bang(x),
      sum_map(bang(x), id1),
      sum_map(id1, bang(y)),
      sum_map(identity_map(x), bang(y)),
      sum_map(bang(x), identity_map(y)),
      sum_map(bang(x), bang(y)),
      cotuple(cotuple(oo.inl, oo.inr), oo.inr),
      cotuple(cotuple(oo.inr, oo.inl), oo.inr),
  };
}

/// First square: c : A -> X+1 and d : A -> 1+Y.
template <PartialSemiring S>
struct Square1Problem {
  EffectusFrame frame;
  KleisliMap<S> c;
  KleisliMap<S> d;
};

/// Second square: c : A -> X+Y and the bang A -> 1.
template <PartialSemiring S>
struct Square2Problem {
  EffectusFrame frame;
  KleisliMap<S> c;
  KleisliMap<S> bang;
};

/// Residuals of the two recovery equations of a mediator.
struct Recovery {
  double first = 0.0;
  double second = 0.0;

  double max() const { return std::max(first, second); }
};

namespace detail {

template <PartialSemiring S>
double push_distance(const StructureMap& f, const Distribution<S>& p, const StructureMap& g, const Distribution<S>& q) {
  try {
    return distance(pushforward(f, p), pushforward(g, q));
  } catch (const UndefinedSum&) {
    return std::numeric_limits<double>::infinity();
  }
}

template <PartialSemiring S>
double push_distance(const StructureMap& f, const Distribution<S>& p, const Distribution<S>& q) {
  try {
    return distance(pushforward(f, p), q);
  } catch (const UndefinedSum&) {
    return std::numeric_limits<double>::infinity();
  }
}

template <PartialSemiring S>
void require_valid(const KleisliMap<S>& m, const char* what) {
  if (Verdict v = m.check(); !v) throw InvalidInput(std::string(what) + ": " + v.witness);
}

}  // namespace detail

/// |(!+id)_* c(a) - (id+!)_* d(a)|, the commutation hypothesis at one point.
template <PartialSemiring S>
double square1_hypothesis_residual(const Square1Problem<S>& pr, Point a) {
  return detail::push_distance(pr.frame.bang_x_plus_id1, pr.c(a), pr.frame.id1_plus_bang_y, pr.d(a));
}

/// u(a)(x) = c(a)(x) on X and u(a)(y) = d(a)(y) on Y.
/// Throws HypothesisViolation if the square does not commute on c and d.
template <PartialSemiring S>
KleisliMap<S> mediator_square1(const Square1Problem<S>& pr) {
  const EffectusFrame& fr = pr.frame;
  if (!(pr.c.codomain() == fr.x_plus_one.sum)) throw UniverseMismatch("mediator_square1: c must land in X+1");
  if (!(pr.d.codomain() == fr.one_plus_y.sum)) throw UniverseMismatch("mediator_square1: d must land in 1+Y");
  if (!(pr.c.domain() == pr.d.domain())) throw UniverseMismatch("mediator_square1: c and d have different domains");
  if (pr.c.grade() != pr.d.grade()) throw DimensionMismatch("mediator_square1: c and d have different grades");
  detail::require_valid(pr.c, "mediator_square1: c");
  detail::require_valid(pr.d, "mediator_square1: d");

  const S& s = pr.c.semiring();
  const std::size_t nx = fr.x.size(), ny = fr.y.size();
  std::vector<Distribution<S>> rows;
  for (Point a = 0; a < pr.c.domain().size(); ++a) {
    if (double r = square1_hypothesis_residual(pr, a); r > s.tol())
      throw HypothesisViolation("mediator_square1: square does not commute at '" + pr.c.domain().label(a) + "'", a, r);
    typename Distribution<S>::Weights w;
    for (Point x = 0; x < nx; ++x) w.emplace_back(x, pr.c(a)(x));
    for (Point y = 0; y < ny; ++y) w.emplace_back(nx + y, pr.d(a)(1 + y));
    auto row = Distribution<S>::unchecked(s, nx + ny, pr.c.grade(), std::move(w));
    if (Verdict v = row.check(); !v)
      throw NormalizationFailure("mediator_square1: row '" + pr.c.domain().label(a) + "': " + v.witness);
    rows.push_back(std::move(row));
  }
  return KleisliMap<S>(s, pr.c.domain(), fr.x_plus_y.sum, pr.c.grade(), std::move(rows));
}

/// (id+!)_* u = c and (!+id)_* u = d, as residuals (infinite if a sum is undefined).
template <PartialSemiring S>
Recovery square1_recovery(const Square1Problem<S>& pr, const KleisliMap<S>& u) {
  Recovery r;
  for (Point a = 0; a < u.domain().size(); ++a) {
    r.first = std::max(r.first, detail::push_distance(pr.frame.idx_plus_bang_y, u(a), pr.c(a)));
    r.second = std::max(r.second, detail::push_distance(pr.frame.bang_x_plus_idy, u(a), pr.d(a)));
  }
  return r;
}

template <PartialSemiring S>
double square2_hypothesis_residual(const Square2Problem<S>& pr, Point a) {
  return detail::push_distance(pr.frame.bang_x_plus_bang_y, pr.c(a), pr.frame.one_plus_one.inl, pr.bang(a));
}

/// u(a)(x) = c(a)(x): the restriction of c to X, defined when c carries no mass on Y.
template <PartialSemiring S>
KleisliMap<S> mediator_square2(const Square2Problem<S>& pr) {
  const EffectusFrame& fr = pr.frame;
  if (!(pr.c.codomain() == fr.x_plus_y.sum)) throw UniverseMismatch("mediator_square2: c must land in X+Y");
  if (!(pr.bang.codomain() == fr.one)) throw UniverseMismatch("mediator_square2: bang must land in 1");
  if (!(pr.c.domain() == pr.bang.domain())) throw UniverseMismatch("mediator_square2: c and bang have different domains");
  if (pr.c.grade() != pr.bang.grade()) throw DimensionMismatch("mediator_square2: c and bang have different grades");
  detail::require_valid(pr.c, "mediator_square2: c");
  detail::require_valid(pr.bang, "mediator_square2: bang");

  const S& s = pr.c.semiring();
  std::vector<Distribution<S>> rows;
  for (Point a = 0; a < pr.c.domain().size(); ++a) {
    if (double r = square2_hypothesis_residual(pr, a); r > s.tol())
      throw HypothesisViolation("mediator_square2: '" + pr.c.domain().label(a) + "' has mass outside X", a, r);
    typename Distribution<S>::Weights w;
    for (Point x = 0; x < fr.x.size(); ++x) w.emplace_back(x, pr.c(a)(x));
    auto row = Distribution<S>::unchecked(s, fr.x.size(), pr.c.grade(), std::move(w));
    if (Verdict v = row.check(); !v)
      throw NormalizationFailure("mediator_square2: row '" + pr.c.domain().label(a) + "': " + v.witness);
    rows.push_back(std::move(row));
  }
  return KleisliMap<S>(s, pr.c.domain(), fr.x, pr.c.grade(), std::move(rows));
}

/// k1_* u = c; the second residual is unused.
template <PartialSemiring S>
Recovery square2_recovery(const Square2Problem<S>& pr, const KleisliMap<S>& u) {
  Recovery r;
  for (Point a = 0; a < u.domain().size(); ++a)
    r.first = std::max(r.first, detail::push_distance(pr.frame.x_plus_y.inl, u(a), pr.c(a)));
  return r;
}

/// Two candidate mediators coincide entrywise (within the semiring tolerance).
template <class Problem, PartialSemiring S>
bool check_uniqueness(const Problem&, const KleisliMap<S>& u, const KleisliMap<S>& u2) {
  return distance(u, u2) <= u.semiring().tol();
}

struct JointMonicity {
  double gamma1_residual = 0.0;  // |gamma1_* sigma - gamma1_* tau|
  double gamma2_residual = 0.0;
  double difference = 0.0;       // |sigma - tau|

  bool agree(double tol) const { return gamma1_residual <= tol && gamma2_residual <= tol; }
  /// Agreement under both gammas forces sigma = tau. Pairs closer than 10 * tol
  /// count as equal.
  bool holds(double tol) const { return !agree(tol) || difference <= 10 * tol; }
};

template <PartialSemiring S>
JointMonicity check_joint_monicity(const EffectusFrame& fr, const Distribution<S>& sigma, const Distribution<S>& tau) {
  if (sigma.universe_size() != 3 || tau.universe_size() != 3)
    throw UniverseMismatch("check_joint_monicity: distributions must live on (1+1)+1");
  return {detail::push_distance(fr.gamma1, sigma, fr.gamma1, tau),
          detail::push_distance(fr.gamma2, sigma, fr.gamma2, tau), distance(sigma, tau)};
}

// ---------------------------------------------------------------------------
// Seeded law suite

enum class Instance { Boolean, UnitInterval, Projection };

inline std::string instance_name(Instance i) {
  switch (i) {
    case Instance::Boolean: return "bool";
    case Instance::UnitInterval: return "prob";
    case Instance::Projection: return "proj";
  }
  return "?";
}

inline Instance parse_instance(const std::string& name) {
  if (name == "bool") return Instance::Boolean;
  if (name == "prob") return Instance::UnitInterval;
  if (name == "proj") return Instance::Projection;
  throw InvalidInput("unknown instance '" + name + "' (expected bool, prob or proj)");
}

struct LawConfig {
  std::vector<Instance> instances{Instance::Boolean, Instance::UnitInterval, Instance::Projection};
  std::size_t max_size = 3;
  std::vector<std::size_t> grades{2};           // projection grades for the effectus squares
  std::vector<std::size_t> monad_grades{1, 2};  // projection grades for the graded-monad laws
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
  bool exhaustive = true;  // Boolean instance: enumerate every map on universes of size <= 2
};

struct LawStats {
  std::string law;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double max_residual = 0.0;
  std::vector<std::uint64_t> failing_trials;
};

struct InstanceReport {
  std::string instance;
  std::size_t grade = 1;
  std::vector<LawStats> laws;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& l : laws) n += l.failed;
    return n;
  }
  const LawStats* find(const std::string& law) const {
    for (const auto& l : laws)
      if (l.law == law) return &l;
    return nullptr;
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& l : laws)
      if (std::isfinite(l.max_residual)) m = std::max(m, l.max_residual);
    return m;
  }
};

struct LawReport {
  LawConfig config;
  std::vector<InstanceReport> instances;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& i : instances) n += i.failures();
    return n;
  }
};

namespace detail {

class LawTally {
 public:
  void record(const std::string& law, std::uint64_t trial, bool ok, double residual = 0.0) {
    auto [it, fresh] = index_.try_emplace(law, stats_.size());
    if (fresh) {
      LawStats fresh_stats;
      fresh_stats.law = law;
      stats_.push_back(std::move(fresh_stats));
    }
    LawStats& st = stats_[it->second];
    if (ok) {
      ++st.passed;
    } else {
      ++st.failed;
      if (st.failing_trials.empty() || st.failing_trials.back() != trial) st.failing_trials.push_back(trial);
    }
    if (std::isfinite(residual)) st.max_residual = std::max(st.max_residual, residual);
  }

  std::vector<LawStats> take() { return std::move(stats_); }

 private:
  std::vector<LawStats> stats_;
  std::map<std::string, std::size_t> index_;
};

inline Structure labelled_set(const std::string& prefix, std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return Structure::set(std::move(labels));
}

template <class F>
void for_each_function(std::size_t n, std::size_t m, F f) {
  if (n > 0 && m == 0) return;
  Function g(n, 0);
  while (true) {
    f(static_cast<const Function&>(g));
    std::size_t k = 0;
    while (k < n && ++g[k] == m) g[k++] = 0;
    if (k == n) return;
  }
}

template <PartialSemiring S>
std::vector<typename S::value_type> dense(const Distribution<S>& p) {
  std::vector<typename S::value_type> out;
  for (Point x = 0; x < p.universe_size(); ++x) out.push_back(p(x));
  return out;
}

template <PartialSemiring S>
KleisliMap<S> with_row(const KleisliMap<S>& m, Point a, Distribution<S> row) {
  std::vector<Distribution<S>> rows = m.rows();
  rows[a] = std::move(row);
  return KleisliMap<S>(m.semiring(), m.domain(), m.codomain(), m.grade(), std::move(rows));
}

/// Replaces one weight of one row by a perturbed value (the result need not be valid).
template <PartialSemiring S>
KleisliMap<S> perturb_entry(const KleisliMap<S>& m, double magnitude, Rng& rng) {
  const S& s = m.semiring();
  const Point a = uniform_index(rng, m.domain().size());
  const Point z = uniform_index(rng, m.codomain().size());
  typename Distribution<S>::Weights w;
  for (Point x = 0; x < m.codomain().size(); ++x)
    w.emplace_back(x, x == z ? perturb(s, m(a)(x), magnitude, rng) : m(a)(x));
  return with_row(m, a, Distribution<S>::unchecked(s, m.codomain().size(), m.grade(), std::move(w)));
}

template <PartialSemiring S>
KleisliMap<S> push_rows(const StructureMap& f, const KleisliMap<S>& m) {
  std::vector<Distribution<S>> rows;
  for (const auto& r : m.rows()) rows.push_back(pushforward(f, r));
  return KleisliMap<S>(m.semiring(), m.domain(), f.codomain, m.grade(), std::move(rows));
}

template <PartialSemiring S>
KleisliMap<S> bang_map(const S& s, const Structure& a, const Structure& one, std::size_t grade) {
  std::vector<Distribution<S>> rows(a.size(), unit(s, 0, 1, grade));
  return KleisliMap<S>(s, a, one, grade, std::move(rows));
}

/// A candidate that satisfies the recovery equations must coincide with the mediator.
template <PartialSemiring S, class RecoveryFn>
bool unique_against(const KleisliMap<S>& u, const KleisliMap<S>& candidate, RecoveryFn recovery) {
  const double tol = u.semiring().tol();
  return recovery(candidate).max() > tol || distance(u, candidate) <= tol;
}

template <PartialSemiring S>
void square1_trial(const S& s, const EffectusFrame& fr, const Structure& a, std::size_t grade, Rng& rng,
                   std::uint64_t trial, LawTally& tally) {
  const double tol = s.tol();
  KleisliMap<S> u0 = random_kleisli_map(s, a, fr.x_plus_y.sum, grade, rng);
  Square1Problem<S> pr{fr, push_rows(fr.idx_plus_bang_y, u0), push_rows(fr.bang_x_plus_idy, u0)};

  double hyp = 0.0;
  for (Point p = 0; p < a.size(); ++p) hyp = std::max(hyp, square1_hypothesis_residual(pr, p));
  tally.record("square1.commutes", trial, hyp <= tol, hyp);

  std::optional<KleisliMap<S>> u;
  try {
    u = mediator_square1(pr);
  } catch (const Error&) {
  }
  tally.record("square1.mediator_exists", trial, u.has_value() && bool(u->check()));
  if (!u) return;

  const Recovery rec = square1_recovery(pr, *u);
  tally.record("square1.recovery", trial, rec.max() <= tol, rec.max());

  auto recovery = [&](const KleisliMap<S>& cand) { return square1_recovery(pr, cand); };
  const double d0 = distance(*u, u0);
  bool unique = check_uniqueness(pr, *u, u0);
  unique = unique_against(*u, perturb_entry(*u, 1e-3, rng), recovery) && unique;
  const Point row = uniform_index(rng, a.size());
  unique = unique_against(*u, with_row(*u, row, random_distribution(s, fr.x_plus_y.sum.size(), grade, rng)), recovery) &&
           unique;
  tally.record("square1.uniqueness", trial, unique, d0);

  // Independent c and d: the mediator must be refused exactly when the square fails to commute.
  Square1Problem<S> bad{fr, random_kleisli_map(s, a, fr.x_plus_one.sum, grade, rng),
                        random_kleisli_map(s, a, fr.one_plus_y.sum, grade, rng)};
  double bad_hyp = 0.0;
  for (Point p = 0; p < a.size(); ++p) bad_hyp = std::max(bad_hyp, square1_hypothesis_residual(bad, p));
  bool refused = false;
  try {
    (void)mediator_square1(bad);
  } catch (const HypothesisViolation&) {
    refused = true;
  }
  tally.record("square1.hypothesis_checked", trial, refused == (bad_hyp > tol));
}

template <PartialSemiring S>
void square2_trial(const S& s, const EffectusFrame& fr, const Structure& a, std::size_t grade, Rng& rng,
                   std::uint64_t trial, LawTally& tally) {
  const double tol = s.tol();
  KleisliMap<S> v0 = random_kleisli_map(s, a, fr.x, grade, rng);
  Square2Problem<S> pr{fr, push_rows(fr.x_plus_y.inl, v0), bang_map(s, a, fr.one, grade)};

  double hyp = 0.0;
  for (Point p = 0; p < a.size(); ++p) hyp = std::max(hyp, square2_hypothesis_residual(pr, p));
  tally.record("square2.commutes", trial, hyp <= tol, hyp);

  std::optional<KleisliMap<S>> u;
  try {
    u = mediator_square2(pr);
  } catch (const Error&) {
  }
  tally.record("square2.mediator_exists", trial, u.has_value() && bool(u->check()));
  if (!u) return;

  const Recovery rec = square2_recovery(pr, *u);
  tally.record("square2.recovery", trial, rec.max() <= tol, rec.max());

  auto recovery = [&](const KleisliMap<S>& cand) { return square2_recovery(pr, cand); };
  bool unique = check_uniqueness(pr, *u, v0);
  unique = unique_against(*u, perturb_entry(*u, 1e-3, rng), recovery) && unique;
  const Point row = uniform_index(rng, a.size());
  unique = unique_against(*u, with_row(*u, row, random_distribution(s, fr.x.size(), grade, rng)), recovery) && unique;
  tally.record("square2.uniqueness", trial, unique, distance(*u, v0));

  Square2Problem<S> bad{fr, random_kleisli_map(s, a, fr.x_plus_y.sum, grade, rng), pr.bang};
  double bad_hyp = 0.0;
  for (Point p = 0; p < a.size(); ++p) bad_hyp = std::max(bad_hyp, square2_hypothesis_residual(bad, p));
  bool refused = false;
  try {
    (void)mediator_square2(bad);
  } catch (const HypothesisViolation&) {
    refused = true;
  }
  tally.record("square2.hypothesis_checked", trial, refused == (bad_hyp > tol));
}

template <PartialSemiring S>
void monad_trial(const S& s, const std::vector<std::size_t>& grades, std::size_t max_size, Rng& rng,
                 std::uint64_t trial, LawTally& tally) {
  const double tol = s.tol();
  auto pick = [&] { return grades[uniform_index(rng, grades.size())]; };
  const std::size_t d = pick(), d2 = pick(), d3 = pick();
  const std::size_t n = 1 + uniform_index(rng, max_size);

  // Graded unit laws: mu^{d,1} . T_d(eta) = id = mu^{1,d} . eta.
  Distribution<S> p = random_distribution(s, n, d, rng);
  const double left = distance(graded_mu(s, map_unit(p), d), p);
  const double right = distance(graded_mu(s, unit_of(p), 1), p);
  tally.record("graded_monad.unit", trial, std::max(left, right) <= tol, std::max(left, right));

  // Associativity on a three-level mixture with grades d, d2, d3.
  Mixture<S, Mixture<S, Distribution<S>>> nested;
  const auto outer = dense(random_distribution(s, 1 + uniform_index(rng, 3), d, rng));
  for (const auto& w : outer) {
    Mixture<S, Distribution<S>> inner;
    for (const auto& v : dense(random_distribution(s, 1 + uniform_index(rng, 3), d2, rng)))
      inner.emplace_back(v, random_distribution(s, n, d3, rng));
    nested.emplace_back(w, std::move(inner));
  }
  const auto lhs = graded_mu(s, map_mixture(nested, [&](const Mixture<S, Distribution<S>>& m) { return graded_mu(s, m, d2); }), d);
  const auto rhs = graded_mu(s, join_mixture(s, nested), d * d2);
  const double assoc = distance(lhs, rhs);
  tally.record("graded_monad.associativity", trial, assoc <= tol, assoc);

  // Kleisli category laws for graded composition.
  const Structure sa = labelled_set("a", 1 + uniform_index(rng, max_size));
  const Structure sb = labelled_set("b", 1 + uniform_index(rng, max_size));
  const Structure sc = labelled_set("c", 1 + uniform_index(rng, max_size));
  const Structure sd = labelled_set("d", 1 + uniform_index(rng, max_size));
  const KleisliMap<S> f1 = random_kleisli_map(s, sa, sb, d, rng);
  const KleisliMap<S> f2 = random_kleisli_map(s, sb, sc, d2, rng);
  const KleisliMap<S> f3 = random_kleisli_map(s, sc, sd, d3, rng);
  const double unit_res =
      std::max(distance(graded_compose(unit_map(s, sa), f1), f1), distance(graded_compose(f1, unit_map(s, sb)), f1));
  tally.record("kleisli.unit", trial, unit_res <= tol, unit_res);
  const KleisliMap<S> f12 = graded_compose(f1, f2);
  tally.record("kleisli.valid_composite", trial, bool(f12.check()) && f12.grade() == d * d2);
  const double kassoc = distance(graded_compose(f12, f3), graded_compose(f1, graded_compose(f2, f3)));
  tally.record("kleisli.associativity", trial, kassoc <= tol, kassoc);
  if constexpr (S::kScalar) {
    const double route = distance(compose_via_extend(f1, f2), f12);
    tally.record("kleisli.extension_route", trial, route <= tol, route);
  }
}

inline void exhaustive_boolean(const BooleanSemiring& s, std::size_t max_size, LawTally& tally) {
  std::uint64_t id = 0;
  for (std::size_t na = 1; na <= max_size; ++na)
    for (std::size_t nx = 0; nx <= max_size; ++nx)
      for (std::size_t ny = 0; ny <= max_size; ++ny) {
        if (nx + ny == 0) continue;
        const Structure a = labelled_set("a", na);
        const EffectusFrame fr = make_frame(labelled_set("x", nx), labelled_set("y", ny));

        for_each_function(na, nx + 1, [&](const Function& fc) {
          for_each_function(na, ny + 1, [&](const Function& fd) {
            Square1Problem<BooleanSemiring> pr{fr, lift(s, StructureMap{a, fr.x_plus_one.sum, fc}),
                                               lift(s, StructureMap{a, fr.one_plus_y.sum, fd})};
            bool commutes = true;
            for (Point p = 0; p < na; ++p) commutes = commutes && square1_hypothesis_residual(pr, p) == 0.0;
            bool ok;
            try {
              const KleisliMap<BooleanSemiring> u = mediator_square1(pr);
              std::size_t satisfying = 0;
              bool all_equal = true;
              for_each_function(na, nx + ny, [&](const Function& g) {
                const auto cand = lift(s, StructureMap{a, fr.x_plus_y.sum, g});
                if (square1_recovery(pr, cand).max() == 0.0) {
                  ++satisfying;
                  all_equal = all_equal && distance(cand, u) == 0.0;
                }
              });
              ok = commutes && satisfying == 1 && all_equal;
            } catch (const HypothesisViolation&) {
              ok = !commutes;
            }
            tally.record("exhaustive.square1", id++, ok);
          });
        });

        if (nx == 0) continue;
        const KleisliMap<BooleanSemiring> bang = bang_map(s, a, fr.one, 1);
        for_each_function(na, nx + ny, [&](const Function& fc) {
          Square2Problem<BooleanSemiring> pr{fr, lift(s, StructureMap{a, fr.x_plus_y.sum, fc}), bang};
          const bool commutes = std::all_of(fc.begin(), fc.end(), [&](Point p) { return p < nx; });
          bool ok;
          try {
            const KleisliMap<BooleanSemiring> u = mediator_square2(pr);
            std::size_t satisfying = 0;
            bool all_equal = true;
            for_each_function(na, nx, [&](const Function& g) {
              const auto cand = lift(s, StructureMap{a, fr.x, g});
              if (square2_recovery(pr, cand).max() == 0.0) {
                ++satisfying;
                all_equal = all_equal && distance(cand, u) == 0.0;
              }
            });
            ok = commutes && satisfying == 1 && all_equal;
          } catch (const HypothesisViolation&) {
            ok = !commutes;
          }
          tally.record("exhaustive.square2", id++, ok);
        });
      }

  // Joint monicity over every pair of maps X -> (1+1)+1 with |X| <= max_size.
  const EffectusFrame fr = make_frame(labelled_set("x", 1), labelled_set("y", 1));
  const auto g1 = lift(s, fr.gamma1), g2 = lift(s, fr.gamma2);
  for (std::size_t n = 1; n <= max_size; ++n) {
    const Structure x = labelled_set("x", n);
    for_each_function(n, 3, [&](const Function& f) {
      for_each_function(n, 3, [&](const Function& g) {
        const auto kf = lift(s, StructureMap{x, fr.three.sum, f});
        const auto kg = lift(s, StructureMap{x, fr.three.sum, g});
        const bool agree = distance(graded_compose(kf, g1), graded_compose(kg, g1)) == 0.0 &&
                           distance(graded_compose(kf, g2), graded_compose(kg, g2)) == 0.0;
        tally.record("exhaustive.joint_monicity", id++, !agree || f == g);
      });
    });
  }
}

}  // namespace detail

/// Runs every law for one instance at one grade.
template <PartialSemiring S>
InstanceReport run_instance_laws(const S& s, const LawConfig& cfg, std::size_t grade) {
  detail::LawTally tally;
  const double tol = s.tol();
  std::vector<std::size_t> monad_grades = S::kScalar ? std::vector<std::size_t>{1} : cfg.monad_grades;
  if (monad_grades.empty()) monad_grades = {1};
  const std::size_t max_size = std::max<std::size_t>(cfg.max_size, 1);

  for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial);
    std::size_t nx = uniform_index(rng, max_size + 1), ny = uniform_index(rng, max_size + 1);
    if (nx + ny == 0) nx = 1;
    const std::size_t na = 1 + uniform_index(rng, max_size);
    const Structure a = detail::labelled_set("a", na);
    const EffectusFrame fr = make_frame(detail::labelled_set("x", nx), detail::labelled_set("y", ny));

    // Generated data must be valid before anything is concluded from it.
    const KleisliMap<S> sample = random_kleisli_map(s, a, fr.x_plus_y.sum, grade, rng);
    bool generated = bool(sample.check());
    if constexpr (std::is_same_v<S, ProjectionSemiring>) {
      for (const auto& row : sample.rows())
        generated = generated && bool(validate_pvm(fr.x_plus_y.sum.universe(), detail::dense(row), tol));
    }
    tally.record("generation.valid", trial, generated);

    // Both squares commute on arbitrary data.
    double sq = 0.0;
    for (const auto& row : sample.rows()) {
      sq = std::max(sq, detail::push_distance(fr.bang_x_plus_id1, pushforward(fr.idx_plus_bang_y, row),
                                              fr.id1_plus_bang_y, pushforward(fr.bang_x_plus_idy, row)));
    }
    if (nx > 0) {
      const Distribution<S> p = random_distribution(s, nx, grade, rng);
      sq = std::max(sq, detail::push_distance(fr.bang_x_plus_bang_y, pushforward(fr.x_plus_y.inl, p),
                                              fr.one_plus_one.inl, pushforward(fr.bang_x, p)));
    }
    tally.record("squares.commute", trial, sq <= tol, sq);

    detail::square1_trial(s, fr, a, grade, rng, trial, tally);
    if (nx > 0) detail::square2_trial(s, fr, a, grade, rng, trial, tally);

    // Joint monicity: random pairs, and swaps of two points (each swap is invisible
    // to at least one of the gammas, so the other one has to tell them apart).
    const Distribution<S> sigma = random_distribution(s, 3, grade, rng);
    bool monic = check_joint_monicity(fr, sigma, random_distribution(s, 3, grade, rng)).holds(tol);
    for (const Function& swap : {Function{1, 0, 2}, Function{2, 1, 0}, Function{0, 2, 1}})
      monic = monic && check_joint_monicity(fr, sigma, pushforward<S>(swap, 3, sigma)).holds(tol);
    tally.record("joint_monicity", trial, monic);

    detail::monad_trial(s, monad_grades, max_size, rng, trial, tally);
  }

  if constexpr (std::is_same_v<S, BooleanSemiring>) {
    if (cfg.exhaustive) detail::exhaustive_boolean(s, std::min<std::size_t>(2, max_size), tally);
  }
  return {std::string(s.name()), grade, tally.take()};
}

inline LawReport run_law_suite(const LawConfig& cfg) {
  LawReport report{cfg, {}};
  for (Instance inst : cfg.instances) {
    switch (inst) {
      case Instance::Boolean:
        report.instances.push_back(run_instance_laws(BooleanSemiring{}, cfg, 1));
        break;
      case Instance::UnitInterval:
        report.instances.push_back(run_instance_laws(UnitIntervalSemiring{cfg.tol}, cfg, 1));
        break;
      case Instance::Projection:
        for (std::size_t d : cfg.grades)
          report.instances.push_back(run_instance_laws(ProjectionSemiring{cfg.tol}, cfg, d));
        break;
    }
  }
  return report;
}

inline std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

inline std::string to_text(const LawReport& r) {
  std::string out = "effectus law suite\n";
  out += "seed: " + std::to_string(r.config.seed) + "\n";
  out += "trials: " + std::to_string(r.config.trials) + "\n";
  out += "max_size: " + std::to_string(r.config.max_size) + "\n";
  out += "tol: " + format_residual(r.config.tol) + "\n";
  for (const auto& inst : r.instances) {
    out += "instance " + inst.instance + " (grade " + std::to_string(inst.grade) + ")\n";
    for (const auto& l : inst.laws) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-30s %6zu passed %4zu failed  max residual %s\n", l.law.c_str(), l.passed,
                    l.failed, format_residual(l.max_residual).c_str());
      out += line;
      if (!l.failing_trials.empty()) {
        out += "    failing trials:";
        for (std::size_t i = 0; i < l.failing_trials.size() && i < 10; ++i)
          out += " " + std::to_string(l.failing_trials[i]);
        out += "\n";
      }
    }
    out += "  " + std::to_string(inst.failures()) + " failures\n";
  }
  out += "total: " + std::to_string(r.failures()) + " failures\n";
  return out;
}

}  // namespace qeff
