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

// Finitely supported S-valued distributions and their Kleisli maps, for any
// partial semiring S.
//
// With S = bool this is the Kleisli category of Set (point masses), with
// S = [0,1] the discrete distribution monad, and with S = Proj(d) the graded
// quantum monad: a distribution is then a projection-valued measure at grade d,
// and composing grade d with grade d' lands in grade d * d'.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qeff/errors.hpp"
#include "qeff/partial_semiring.hpp"
#include "qeff/rstruct.hpp"

namespace qeff {

/// Weights over the points {0, ..., universe_size - 1}; absent points weigh zero.
template <PartialSemiring S>
class Distribution {
 public:
  using value_type = typename S::value_type;
  using Weights = std::vector<std::pair<Point, value_type>>;

  /// Validating constructor: every weight must be an element of the given grade,
  /// every partial sum defined, and the total equal to one.
  static Distribution make(const S& s, std::size_t universe_size, std::size_t grade, Weights weights) {
    Distribution p = unchecked(s, universe_size, grade, std::move(weights));
    if (Verdict v = p.check(); !v) throw InvalidInput("invalid distribution: " + v.witness);
    if (universe_size == 1 && s.distance(p.weight(0), s.one(grade)) > s.tol())
      throw InvalidInput("a distribution on a singleton must be its point mass");
    return p;
  }

  /// Only checks that points are in range and not repeated; zero weights are dropped.
  static Distribution unchecked(const S& s, std::size_t universe_size, std::size_t grade, Weights weights) {
    Distribution p(s, universe_size, grade);
    for (auto& [x, w] : weights) {
      if (x >= universe_size)
        throw InvalidInput("distribution weight on point " + std::to_string(x) + " outside a universe of size " +
                           std::to_string(universe_size));
      if (s.grade_of(w) != grade)
        throw DimensionMismatch("distribution weight of grade " + std::to_string(s.grade_of(w)) +
                                " in a distribution of grade " + std::to_string(grade));
      if (s.is_zero(w)) {
        if (p.support_.count(x)) throw InvalidInput("distribution repeats point " + std::to_string(x));
        continue;
      }
      if (!p.support_.emplace(x, std::move(w)).second)
        throw InvalidInput("distribution repeats point " + std::to_string(x));
    }
    return p;
  }

  Verdict check() const {
    for (const auto& [x, w] : support_)
      if (!s_.is_element(w)) return Verdict::fail("weight at point " + std::to_string(x) + " is not an element");
    std::optional<value_type> total = s_.zero(grade_);
    for (const auto& [x, w] : support_) {
      total = s_.try_add(*total, w);
      if (!total) return Verdict::fail("partial sum undefined at point " + std::to_string(x));
    }
    const double residual = s_.distance(*total, s_.one(grade_));
    if (residual > s_.tol())
      return Verdict::fail("weights do not sum to one (residual " + std::to_string(residual) + ")");
    return Verdict::pass();
  }

  const S& semiring() const noexcept { return s_; }
  std::size_t universe_size() const noexcept { return n_; }
  std::size_t grade() const noexcept { return grade_; }
  const std::map<Point, value_type>& support() const noexcept { return support_; }

  value_type weight(Point x) const {
    auto it = support_.find(x);
    return it == support_.end() ? s_.zero(grade_) : it->second;
  }
  value_type operator()(Point x) const { return weight(x); }

 private:
  Distribution(const S& s, std::size_t n, std::size_t grade) : s_(s), n_(n), grade_(grade) {}

  S s_;
  std::size_t n_;
  std::size_t grade_;
  std::map<Point, value_type> support_;
};

/// Largest pointwise distance; infinite when shapes differ.
template <PartialSemiring S>
double distance(const Distribution<S>& p, const Distribution<S>& q) {
  if (p.universe_size() != q.universe_size() || p.grade() != q.grade())
    return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (Point x = 0; x < p.universe_size(); ++x) m = std::max(m, p.semiring().distance(p(x), q(x)));
  return m;
}

/// Point mass at x: one(grade) at x, zero elsewhere.
template <PartialSemiring S>
Distribution<S> unit(const S& s, Point x, std::size_t universe_size, std::size_t grade = 1) {
  if (x >= universe_size) throw InvalidInput("unit: point outside the universe");
  return Distribution<S>::unchecked(s, universe_size, grade, {{x, s.one(grade)}});
}

/// D(f): fiberwise sums along f. Throws UndefinedSum if a fiber sum is undefined,
/// which cannot happen for valid input.
template <PartialSemiring S>
Distribution<S> pushforward(std::span<const Point> f, std::size_t target_size, const Distribution<S>& p) {
  if (f.size() != p.universe_size())
    throw UniverseMismatch("pushforward: map domain has " + std::to_string(f.size()) +
                           " points, distribution universe has " + std::to_string(p.universe_size()));
  const S& s = p.semiring();
  std::map<Point, typename S::value_type> fibers;
  for (const auto& [x, w] : p.support()) {
    if (f[x] >= target_size) throw InvalidInput("pushforward: map leaves its codomain");
    auto [it, fresh] = fibers.try_emplace(f[x], w);
    if (fresh) continue;
    auto sum = s.try_add(it->second, w);
    if (!sum) throw UndefinedSum("pushforward: fiber sum over point " + std::to_string(f[x]) + " is undefined");
    it->second = std::move(*sum);
  }
  return Distribution<S>::unchecked(s, target_size, p.grade(), {fibers.begin(), fibers.end()});
}

template <PartialSemiring S>
Distribution<S> pushforward(const StructureMap& f, const Distribution<S>& p) {
  return pushforward<S>(f.image, f.codomain.size(), p);
}

/// A map A -> T(B): one distribution over B per point of A, all at the same grade.
template <PartialSemiring S>
class KleisliMap {
 public:
  using value_type = typename S::value_type;

  KleisliMap(S s, Structure domain, Structure codomain, std::size_t grade, std::vector<Distribution<S>> rows)
      : s_(std::move(s)), domain_(std::move(domain)), codomain_(std::move(codomain)), grade_(grade),
        rows_(std::move(rows)) {
    if (grade_ == 0) throw InvalidInput("Kleisli map grade must be positive");
    if (rows_.size() != domain_.size())
      throw InvalidInput("Kleisli map has " + std::to_string(rows_.size()) + " rows for a domain of size " +
                         std::to_string(domain_.size()));
    for (const auto& r : rows_) {
      if (r.universe_size() != codomain_.size())
        throw UniverseMismatch("Kleisli map row is not over the codomain universe");
      if (r.grade() != grade_) throw DimensionMismatch("Kleisli map row has the wrong grade");
    }
  }

  const S& semiring() const noexcept { return s_; }
  const Structure& domain() const noexcept { return domain_; }
  const Structure& codomain() const noexcept { return codomain_; }
  std::size_t grade() const noexcept { return grade_; }
  const std::vector<Distribution<S>>& rows() const noexcept { return rows_; }
  const Distribution<S>& operator()(Point a) const { return rows_.at(a); }

  Verdict check() const {
    for (Point a = 0; a < rows_.size(); ++a)
      if (Verdict v = rows_[a].check(); !v) return Verdict::fail("row '" + domain_.label(a) + "': " + v.witness);
    return Verdict::pass();
  }

 private:
  S s_;
  Structure domain_;
  Structure codomain_;
  std::size_t grade_;
  std::vector<Distribution<S>> rows_;
};

template <PartialSemiring S>
double distance(const KleisliMap<S>& c, const KleisliMap<S>& e) {
  if (c.rows().size() != e.rows().size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t a = 0; a < c.rows().size(); ++a) m = std::max(m, distance(c(a), e(a)));
  return m;
}

/// Kleisli lift of a function, eta . f; grade 1.
template <PartialSemiring S>
KleisliMap<S> lift(const S& s, const StructureMap& f) {
  std::vector<Distribution<S>> rows;
  for (Point p : f.image) rows.push_back(unit(s, p, f.codomain.size()));
  return KleisliMap<S>(s, f.domain, f.codomain, 1, std::move(rows));
}

/// The identity Kleisli map eta (grade 1).
template <PartialSemiring S>
KleisliMap<S> unit_map(const S& s, const Structure& a) {
  return lift(s, identity_map(a));
}

/// x |-> one(d) 1_x. Not a unit of the graded monad for d > 1; provided for grade
/// bookkeeping in tests and examples.
template <PartialSemiring S>
KleisliMap<S> unit_map_at_grade(const S& s, const Structure& a, std::size_t grade) {
  std::vector<Distribution<S>> rows;
  for (Point p = 0; p < a.size(); ++p) rows.push_back(unit(s, p, a.size(), grade));
  return KleisliMap<S>(s, a, a, grade, std::move(rows));
}

/// c_*(p)(y) = sum_x p(x) * c(x)(y), for the scalar instances.
template <PartialSemiring S>
  requires(S::kScalar)
Distribution<S> kleisli_extend(const KleisliMap<S>& c, const Distribution<S>& p) {
  if (p.universe_size() != c.domain().size()) throw UniverseMismatch("kleisli_extend: p is not over c's domain");
  const S& s = c.semiring();
  std::map<Point, typename S::value_type> out;
  for (const auto& [x, px] : p.support())
    for (const auto& [y, cxy] : c(x).support()) {
      auto term = s.mul(px, cxy);
      auto [it, fresh] = out.try_emplace(y, term);
      if (fresh) continue;
      auto sum = s.try_add(it->second, term);
      if (!sum) throw UndefinedSum("kleisli_extend: undefined sum");
      it->second = *sum;
    }
  return Distribution<S>::unchecked(s, c.codomain().size(), 1, {out.begin(), out.end()});
}

/// e . c with (e . c)(a)(z) = sum_b c(a)(b) (x) e(b)(z). c's weight is the left
/// Kronecker factor; the result has grade c.grade() * e.grade().
template <PartialSemiring S>
KleisliMap<S> graded_compose(const KleisliMap<S>& c, const KleisliMap<S>& e) {
  if (!(c.codomain() == e.domain())) throw UniverseMismatch("graded_compose: codomain of c is not the domain of e");
  const S& s = c.semiring();
  const std::size_t grade = c.grade() * e.grade();
  std::vector<Distribution<S>> rows;
  rows.reserve(c.rows().size());
  for (const auto& ca : c.rows()) {
    std::map<Point, typename S::value_type> out;
    for (const auto& [b, cab] : ca.support())
      for (const auto& [z, ebz] : e(b).support()) {
        auto term = s.tensor(cab, ebz);
        auto [it, fresh] = out.try_emplace(z, term);
        if (fresh) continue;
        auto sum = s.try_add(it->second, term);
        if (!sum) throw UndefinedSum("graded_compose: undefined sum at point " + std::to_string(z));
        it->second = std::move(*sum);
      }
    rows.push_back(Distribution<S>::unchecked(s, e.codomain().size(), grade, {out.begin(), out.end()}));
  }
  return KleisliMap<S>(s, c.domain(), e.codomain(), grade, std::move(rows));
}

/// Scalar composition through Kleisli extension: a |-> e_*(c(a)).
template <PartialSemiring S>
  requires(S::kScalar)
KleisliMap<S> compose_via_extend(const KleisliMap<S>& c, const KleisliMap<S>& e) {
  if (!(c.codomain() == e.domain())) throw UniverseMismatch("compose_via_extend: codomain of c is not the domain of e");
  std::vector<Distribution<S>> rows;
  for (const auto& ca : c.rows()) rows.push_back(kleisli_extend(e, ca));
  return KleisliMap<S>(c.semiring(), c.domain(), e.codomain(), 1, std::move(rows));
}

/// An explicitly listed finitely supported distribution over some set of values T:
/// pairs (weight, value). Repeated values are allowed and combine by bilinearity.
template <PartialSemiring S, class T>
using Mixture = std::vector<std::pair<typename S::value_type, T>>;

/// Verdict on the outer weights of a mixture: elements of `grade` summing to one.
template <PartialSemiring S, class T>
Verdict check_mixture_weights(const S& s, const Mixture<S, T>& m, std::size_t grade) {
  std::optional<typename S::value_type> total = s.zero(grade);
  for (const auto& [w, v] : m) {
    if (s.grade_of(w) != grade) return Verdict::fail("outer weight has the wrong grade");
    if (!s.is_element(w)) return Verdict::fail("outer weight is not an element");
    total = s.try_add(*total, w);
    if (!total) return Verdict::fail("outer weights have an undefined partial sum");
  }
  if (s.distance(*total, s.one(grade)) > s.tol()) return Verdict::fail("outer weights do not sum to one");
  return Verdict::pass();
}

/// Graded multiplication mu^{d,d'}: (sum_i P_i 1_{p_i}) |-> x |-> sum_i P_i (x) p_i(x).
/// The result has grade d * d'.
template <PartialSemiring S>
Distribution<S> graded_mu(const S& s, const Mixture<S, Distribution<S>>& outer, std::size_t outer_grade) {
  if (outer.empty()) throw InvalidInput("graded_mu: empty outer distribution");
  if (Verdict v = check_mixture_weights<S>(s, outer, outer_grade); !v) throw InvalidInput("graded_mu: " + v.witness);
  const std::size_t n = outer.front().second.universe_size();
  const std::size_t inner_grade = outer.front().second.grade();
  for (const auto& [w, p] : outer) {
    if (p.universe_size() != n || p.grade() != inner_grade)
      throw InvalidInput("graded_mu: inner distributions disagree on universe or grade");
    if (Verdict v = p.check(); !v) throw InvalidInput("graded_mu: invalid inner distribution in support: " + v.witness);
  }
  std::map<Point, typename S::value_type> out;
  for (const auto& [w, p] : outer)
    for (const auto& [x, px] : p.support()) {
      auto term = s.tensor(w, px);
      auto [it, fresh] = out.try_emplace(x, term);
      if (fresh) continue;
      auto sum = s.try_add(it->second, term);
      if (!sum) throw UndefinedSum("graded_mu: undefined sum at point " + std::to_string(x));
      it->second = std::move(*sum);
    }
  return Distribution<S>::make(s, n, outer_grade * inner_grade, {out.begin(), out.end()});
}

/// mu at the level of mixtures: flattens two layers, tensoring the weights.
template <PartialSemiring S, class T>
Mixture<S, T> join_mixture(const S& s, const Mixture<S, Mixture<S, T>>& nested) {
  Mixture<S, T> flat;
  for (const auto& [w, inner] : nested)
    for (const auto& [v, t] : inner) flat.emplace_back(s.tensor(w, v), t);
  return flat;
}

/// T(f) on an explicitly listed mixture.
template <class W, class T, class F>
auto map_mixture(const std::vector<std::pair<W, T>>& m, F f) {
  using U = std::invoke_result_t<F, const T&>;
  std::vector<std::pair<W, U>> out;
  out.reserve(m.size());
  for (const auto& [w, t] : m) out.emplace_back(w, f(t));
  return out;
}

/// T(eta)(p) = sum_x p(x) 1_{eta(x)}.
template <PartialSemiring S>
Mixture<S, Distribution<S>> map_unit(const Distribution<S>& p) {
  Mixture<S, Distribution<S>> out;
  for (const auto& [x, w] : p.support()) out.emplace_back(w, unit(p.semiring(), x, p.universe_size()));
  return out;
}

/// eta_{T(A)}(p) = 1_p.
template <PartialSemiring S>
Mixture<S, Distribution<S>> unit_of(const Distribution<S>& p) {
  return {{p.semiring().one(1), p}};
}

struct QdHomViolation {
  int condition = 0;  // 1: commutation, 2: product over an unrelated tuple
  std::string relation;
  Tuple domain_tuple;
  Tuple codomain_tuple;  // condition 2: the unrelated tuple; condition 1: the two points
  std::size_t first = 0, second = 0;  // positions in the tuple (condition 1)
};

struct QdHomCheck {
  std::optional<QdHomViolation> violation;

  explicit operator bool() const noexcept { return !violation.has_value(); }
};

/// Checks that c maps every related tuple of its domain into the corresponding
/// relation of T(codomain): weights of the tuple's distributions pairwise commute
/// (over all positions and points, including a position with itself), and every
/// product of weights along an unrelated codomain tuple vanishes.
template <PartialSemiring S>
QdHomCheck is_qd_kleisli_hom(const KleisliMap<S>& c) {
  require_same_signature(c.domain(), c.codomain(), "is_qd_kleisli_hom");
  const S& s = c.semiring();
  for (const auto& [name, rel] : c.domain().relations()) {
    const Relation& target = *c.codomain().relation(name);
    for (const Tuple& t : rel.tuples) {
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i; j < t.size(); ++j)
          for (const auto& [x, px] : c(t[i]).support())
            for (const auto& [y, py] : c(t[j]).support())
              if (!s.commute(px, py)) return {QdHomViolation{1, name, t, {x, y}, i, j}};

      Tuple image(t.size());
      std::optional<QdHomViolation> found;
      auto walk = [&](auto&& self, std::size_t k, const typename S::value_type& acc) -> void {
        if (found) return;
        if (k == t.size()) {
          if (!target.tuples.count(image)) found = QdHomViolation{2, name, t, image, 0, 0};
          return;
        }
        for (const auto& [x, px] : c(t[k]).support()) {
          auto next = s.mul(acc, px);
          if (s.is_zero(next)) continue;
          image[k] = x;
          self(self, k + 1, next);
          if (found) return;
        }
      };
      walk(walk, 0, s.one(c.grade()));
      if (found) return {std::move(found)};
    }
  }
  return {};
}

inline std::string describe(const QdHomViolation& v, const Structure& domain, const Structure& codomain) {
  auto labels = [](const Structure& s, const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + s.label(t[i]);
    return out + ")";
  };
  if (v.condition == 1)
    return "condition (1) fails on " + v.relation + labels(domain, v.domain_tuple) + ": weights at '" +
           codomain.label(v.codomain_tuple[0]) + "' (position " + std::to_string(v.first) + ") and '" +
           codomain.label(v.codomain_tuple[1]) + "' (position " + std::to_string(v.second) + ") do not commute";
  return "condition (2) fails on " + v.relation + labels(domain, v.domain_tuple) + ": nonzero product over " +
         labels(codomain, v.codomain_tuple) + ", which is not related";
}

}  // namespace qeff
