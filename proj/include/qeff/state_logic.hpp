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

// States, predicates and scalars over a relational structure, with validity,
// conditioning and the state/predicate transformers induced by Kleisli maps.
//
//              scalar 1 -> 1+1   state 1 -> X          predicate X -> 1+1   validity
//   bool       b in {0,1}        a point x              a subset S           x in S
//   prob       p in [0,1]        sum_x p_x = 1          f : X -> [0,1]       sum_x p_x f(x)
//   proj       E in Proj(d)      sum_x E_x = 1          q : X -> Proj(d')    sum_x E_x (x) q(x)

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeff/errors.hpp"
#include "qeff/kleisli.hpp"
#include "qeff/partial_semiring.hpp"
#include "qeff/rstruct.hpp"

namespace qeff {

template <PartialSemiring S>
struct State {
  Structure structure;
  Distribution<S> distribution;

  const S& semiring() const { return distribution.semiring(); }
  std::size_t grade() const { return distribution.grade(); }
};

template <PartialSemiring S>
State<S> make_state(Structure structure, Distribution<S> p) {
  if (p.universe_size() != structure.size()) throw UniverseMismatch("make_state: distribution is not over the structure");
  if (Verdict v = p.check(); !v) throw InvalidInput("make_state: " + v.witness);
  return {std::move(structure), std::move(p)};
}

/// One weight per point. For projections, points that occur together in some
/// tuple of some relation must carry commuting projections.
template <PartialSemiring S>
struct Predicate {
  S semiring;
  Structure structure;
  std::size_t grade = 1;
  std::vector<typename S::value_type> values;

  typename S::value_type operator()(Point x) const { return values.at(x); }
};

template <PartialSemiring S>
Verdict check_predicate(const Predicate<S>& q) {
  const S& s = q.semiring;
  if (q.values.size() != q.structure.size())
    return Verdict::fail("predicate has " + std::to_string(q.values.size()) + " values for " +
                         std::to_string(q.structure.size()) + " points");
  for (Point x = 0; x < q.values.size(); ++x) {
    if (s.grade_of(q.values[x]) != q.grade) return Verdict::fail("value at '" + q.structure.label(x) + "' has the wrong grade");
    if (!s.is_element(q.values[x])) return Verdict::fail("value at '" + q.structure.label(x) + "' is not an element");
  }
  for (const auto& [name, rel] : q.structure.relations())
    for (const Tuple& t : rel.tuples)
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
          if (!s.commute(q.values[t[i]], q.values[t[j]]))
            return Verdict::fail("values at '" + q.structure.label(t[i]) + "' and '" + q.structure.label(t[j]) +
                                 "' do not commute but co-occur in " + name);
  return Verdict::pass();
}

template <PartialSemiring S>
Predicate<S> make_predicate(const S& s, Structure structure, std::size_t grade, std::vector<typename S::value_type> values) {
  Predicate<S> q{s, std::move(structure), grade, std::move(values)};
  if (Verdict v = check_predicate(q); !v) throw InvalidInput("make_predicate: " + v.witness);
  return q;
}

/// The predicate that is one everywhere.
template <PartialSemiring S>
Predicate<S> truth(const S& s, const Structure& structure, std::size_t grade = 1) {
  return {s, structure, grade, std::vector<typename S::value_type>(structure.size(), s.one(grade))};
}

namespace detail {

template <PartialSemiring S>
void require_compatible(const State<S>& p, const Predicate<S>& q, const char* op) {
  if (!(p.structure == q.structure)) throw UniverseMismatch(std::string(op) + ": state and predicate live on different structures");
  if (Verdict v = check_predicate(q); !v) throw InvalidInput(std::string(op) + ": " + v.witness);
}

}  // namespace detail

/// p |= q = sum_x p_x (x) q_x, a scalar of grade p.grade() * q.grade.
template <PartialSemiring S>
typename S::value_type validity(const State<S>& p, const Predicate<S>& q) {
  detail::require_compatible(p, q, "validity");
  const S& s = p.semiring();
  typename S::value_type total = s.zero(p.grade() * q.grade);
  for (Point x = 0; x < p.structure.size(); ++x) {
    auto sum = s.try_add(total, s.tensor(p.distribution(x), q(x)));
    if (!sum) throw UndefinedSum("validity: undefined sum at '" + p.structure.label(x) + "'");
    total = std::move(*sum);
  }
  return total;
}

/// p given q: terms p_x (x) q_x normalized against the validity r = p |= q.
/// For probabilities this divides by r; for projections the terms are kept and
/// read relative to their support r, which they resolve exactly.
template <PartialSemiring S>
struct Conditioned {
  Structure structure;
  std::size_t grade = 1;
  std::vector<typename S::value_type> terms;
  typename S::value_type support;
};

template <PartialSemiring S>
Conditioned<S> condition(const State<S>& p, const Predicate<S>& q) {
  const S& s = p.semiring();
  auto r = validity(p, q);
  if (s.is_zero(r)) throw ZeroValidity("condition: the predicate has zero validity in the state");
  Conditioned<S> out{p.structure, p.grade() * q.grade, {}, r};
  for (Point x = 0; x < p.structure.size(); ++x) out.terms.push_back(s.normalize(s.tensor(p.distribution(x), q(x)), r));
  return out;
}

/// |sum_x terms - normalize(r, r)|: zero up to rounding for every conditioned state.
template <PartialSemiring S>
double conditioning_residual(const S& s, const Conditioned<S>& c) {
  auto total = try_sum(s, c.terms, c.grade);
  if (!total) return INFINITY;
  return s.distance(*total, s.normalize(c.support, c.support));
}

/// The conditioned state as a distribution (scalar instances).
template <PartialSemiring S>
  requires(S::kScalar)
State<S> conditioned_state(const S& s, const Conditioned<S>& c) {
  typename Distribution<S>::Weights w;
  for (Point x = 0; x < c.terms.size(); ++x) w.emplace_back(x, c.terms[x]);
  return make_state(c.structure, Distribution<S>::make(s, c.terms.size(), 1, std::move(w)));
}

/// Stat(f)(p) = f . p, composing p : 1 -> X with f : X -> Y.
template <PartialSemiring S>
State<S> stat_transform(const KleisliMap<S>& f, const State<S>& p) {
  if (!(f.domain() == p.structure)) throw UniverseMismatch("stat_transform: state is not on the domain of f");
  const Structure one = terminal(p.structure.signature());
  const KleisliMap<S> as_map(p.semiring(), one, p.structure, p.grade(), {p.distribution});
  const KleisliMap<S> composite = graded_compose(as_map, f);
  return {f.codomain(), composite(0)};
}

/// Pred(f)(q) = q . f : x |-> sum_y f(x)(y) (x) q(y). The commutation condition on
/// the result is not enforced here; it holds when f is a homomorphism into T(Y).
template <PartialSemiring S>
Predicate<S> pred_transform(const KleisliMap<S>& f, const Predicate<S>& q) {
  if (!(f.codomain() == q.structure)) throw UniverseMismatch("pred_transform: predicate is not on the codomain of f");
  const S& s = f.semiring();
  const std::size_t grade = f.grade() * q.grade;
  Predicate<S> out{s, f.domain(), grade, {}};
  for (Point x = 0; x < f.domain().size(); ++x) {
    typename S::value_type acc = s.zero(grade);
    for (const auto& [y, w] : f(x).support()) {
      auto sum = s.try_add(acc, s.tensor(w, q(y)));
      if (!sum) throw UndefinedSum("pred_transform: undefined sum at '" + f.domain().label(x) + "'");
      acc = std::move(*sum);
    }
    out.values.push_back(std::move(acc));
  }
  return out;
}

/// Point mass at x as a state.
template <PartialSemiring S>
State<S> point_state(const S& s, const Structure& structure, Point x, std::size_t grade = 1) {
  return make_state(structure, unit(s, x, structure.size(), grade));
}

/// Indicator of a subset as a predicate.
template <PartialSemiring S>
Predicate<S> subset_predicate(const S& s, const Structure& structure, const std::vector<bool>& subset,
                              std::size_t grade = 1) {
  std::vector<typename S::value_type> values;
  for (bool b : subset) values.push_back(s.from_bool(b, grade));
  return make_predicate(s, structure, grade, std::move(values));
}

/// Reads a sharp scalar (zero or one) back as a truth value.
template <PartialSemiring S>
std::optional<bool> sharp_value(const S& s, const typename S::value_type& v) {
  if (s.is_zero(v)) return false;
  if (s.distance(v, s.one(s.grade_of(v))) <= s.tol()) return true;
  return std::nullopt;
}

}  // namespace qeff
