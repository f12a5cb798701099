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

// Finite relational structures, graphs and homomorphisms, plus the coproduct and
// terminal structures that give the Kleisli categories their effectus shape.
//
// Points are indices into the universe; labels only matter for I/O. Disjoint
// unions tag their points as "(x,1)" and "(y,2)".

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qeff/errors.hpp"

namespace qeff {

using Point = std::size_t;
using Tuple = std::vector<Point>;
/// Total function between universes, stored as the image of each domain point.
using Function = std::vector<Point>;
/// Relation name -> arity.
using Signature = std::map<std::string, std::size_t>;

struct Relation {
  std::size_t arity = 0;
  std::set<Tuple> tuples;

  friend bool operator==(const Relation&, const Relation&) = default;
};

class Structure {
 public:
  /// The empty structure with no relations.
  Structure() = default;

  Structure(std::vector<std::string> universe, std::map<std::string, Relation> relations)
      : universe_(std::move(universe)), relations_(std::move(relations)) {
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (!index_.emplace(universe_[i], i).second)
        throw InvalidInput("duplicate universe label '" + universe_[i] + "'");
    }
    for (const auto& [name, rel] : relations_) {
      if (rel.arity == 0) throw InvalidInput("relation '" + name + "' has arity 0");
      for (const Tuple& t : rel.tuples) {
        if (t.size() != rel.arity)
          throw InvalidInput("relation '" + name + "' has a tuple of length " + std::to_string(t.size()) +
                             ", expected " + std::to_string(rel.arity));
        for (Point p : t)
          if (p >= universe_.size())
            throw InvalidInput("relation '" + name + "' mentions point " + std::to_string(p) +
                               " outside a universe of size " + std::to_string(universe_.size()));
      }
    }
  }

  /// A bare set: a universe with no relations.
  static Structure set(std::vector<std::string> universe) { return Structure(std::move(universe), {}); }

  /// Builds a structure whose tuples are given by labels.
  static Structure from_labels(std::vector<std::string> universe,
                               const std::map<std::string, std::pair<std::size_t, std::vector<std::vector<std::string>>>>& rels) {
    Structure shell(universe, {});
    std::map<std::string, Relation> relations;
    for (const auto& [name, spec] : rels) {
      Relation r{spec.first, {}};
      for (const auto& labels : spec.second) {
        Tuple t;
        for (const auto& l : labels) {
          auto p = shell.find(l);
          if (!p) throw InvalidInput("relation '" + name + "' mentions unknown label '" + l + "'");
          t.push_back(*p);
        }
        r.tuples.insert(std::move(t));
      }
      relations.emplace(name, std::move(r));
    }
    return Structure(std::move(universe), std::move(relations));
  }

  std::size_t size() const noexcept { return universe_.size(); }
  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::string& label(Point p) const { return universe_.at(p); }
  const std::map<std::string, Relation>& relations() const noexcept { return relations_; }

  std::optional<Point> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Signature signature() const {
    Signature sig;
    for (const auto& [name, rel] : relations_) sig.emplace(name, rel.arity);
    return sig;
  }

  const Relation* relation(const std::string& name) const {
    auto it = relations_.find(name);
    return it == relations_.end() ? nullptr : &it->second;
  }

  bool holds(const std::string& name, const Tuple& t) const {
    const Relation* r = relation(name);
    return r != nullptr && r->tuples.count(t) > 0;
  }

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.universe_ == b.universe_ && a.relations_ == b.relations_;
  }

 private:
  std::vector<std::string> universe_;
  std::map<std::string, Relation> relations_;
  std::unordered_map<std::string, Point> index_;
};

inline void require_same_signature(const Structure& a, const Structure& b, const char* op) {
  if (a.signature() != b.signature())
    throw SignatureMismatch(std::string(op) + ": structures have different relation signatures");
}

/// Simple graph: a single binary relation "E", irreflexive and symmetric.
class Graph {
 public:
  explicit Graph(Structure s) : s_(std::move(s)) {
    if (s_.relations().size() != 1 || s_.relation("E") == nullptr || s_.relation("E")->arity != 2)
      throw InvalidInput("a graph has exactly one binary relation named \"E\"");
    for (const Tuple& e : s_.relation("E")->tuples) {
      if (e[0] == e[1]) throw InvalidInput("graph has a loop at '" + s_.label(e[0]) + "'");
      if (!s_.holds("E", {e[1], e[0]}))
        throw InvalidInput("graph edge ('" + s_.label(e[0]) + "','" + s_.label(e[1]) + "') is not symmetric");
    }
    adj_.assign(size() * size(), false);
    for (const Tuple& e : s_.relation("E")->tuples) adj_[e[0] * size() + e[1]] = true;
  }

  /// Edges are closed under symmetry; loops are rejected.
  static Graph from_edges(std::vector<std::string> vertices,
                          const std::vector<std::pair<std::string, std::string>>& edges) {
    std::vector<std::vector<std::string>> tuples;
    for (const auto& [u, v] : edges) {
      if (u == v) throw InvalidInput("graph has a loop at '" + u + "'");
      tuples.push_back({u, v});
      tuples.push_back({v, u});
    }
    return Graph(Structure::from_labels(std::move(vertices), {{"E", {2, tuples}}}));
  }

  /// Vertices labelled "0", ..., "n-1".
  static Graph from_index_edges(std::size_t n, const std::vector<std::pair<Point, Point>>& edges) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    Relation e{2, {}};
    for (auto [u, v] : edges) {
      if (u == v) throw InvalidInput("graph has a loop at '" + std::to_string(u) + "'");
      e.tuples.insert({u, v});
      e.tuples.insert({v, u});
    }
    return Graph(Structure(std::move(labels), {{"E", std::move(e)}}));
  }

  const Structure& structure() const noexcept { return s_; }
  std::size_t size() const noexcept { return s_.size(); }
  bool adjacent(Point v, Point w) const { return adj_[v * size() + w]; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.s_ == b.s_; }

 private:
  Structure s_;
  std::vector<bool> adj_;
};

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<Point, Point>> edges;
  for (Point i = 0; i < n; ++i)
    for (Point j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_index_edges(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidInput("cycles need at least 3 vertices");
  std::vector<std::pair<Point, Point>> edges;
  for (Point i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_index_edges(n, edges);
}

/// Function between the universes of two structures.
struct StructureMap {
  Structure domain;
  Structure codomain;
  Function image;

  static StructureMap make(Structure domain, Structure codomain, Function image) {
    if (image.size() != domain.size())
      throw InvalidInput("map defines " + std::to_string(image.size()) + " images for a domain of size " +
                         std::to_string(domain.size()));
    for (Point p : image)
      if (p >= codomain.size()) throw InvalidInput("map sends a point outside its codomain");
    return {std::move(domain), std::move(codomain), std::move(image)};
  }

  Point operator()(Point p) const { return image.at(p); }

  friend bool operator==(const StructureMap&, const StructureMap&) = default;
};

struct HomViolation {
  std::string relation;
  Tuple tuple;  // in the domain
};

struct HomCheck {
  std::optional<HomViolation> violation;

  explicit operator bool() const noexcept { return !violation.has_value(); }
};

/// Checks that every related tuple of `a` maps to a related tuple of `b`.
inline HomCheck is_homomorphism(const Structure& a, const Structure& b, std::span<const Point> f) {
  require_same_signature(a, b, "is_homomorphism");
  if (f.size() != a.size()) throw InvalidInput("is_homomorphism: function is not total");
  Tuple image;
  for (const auto& [name, rel] : a.relations()) {
    const Relation& target = *b.relation(name);
    for (const Tuple& t : rel.tuples) {
      image.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = f[t[i]];
      if (!target.tuples.count(image)) return {HomViolation{name, t}};
    }
  }
  return {};
}

inline HomCheck is_homomorphism(const StructureMap& f) {
  return is_homomorphism(f.domain, f.codomain, f.image);
}

inline StructureMap identity_map(const Structure& s) {
  Function id(s.size());
  std::iota(id.begin(), id.end(), Point{0});
  return {s, s, std::move(id)};
}

/// g after f.
inline StructureMap compose(const StructureMap& g, const StructureMap& f) {
  if (!(f.codomain == g.domain)) throw UniverseMismatch("compose: codomain/domain mismatch");
  Function h(f.image.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = g.image[f.image[i]];
  return {f.domain, g.codomain, std::move(h)};
}

/// Singleton structure {*} carrying the full relation of every arity in the signature.
inline Structure terminal(const Signature& sig) {
  std::map<std::string, Relation> rels;
  for (const auto& [name, arity] : sig) rels.emplace(name, Relation{arity, {Tuple(arity, 0)}});
  return Structure({"*"}, std::move(rels));
}

/// The empty structure over a signature.
inline Structure initial(const Signature& sig) {
  std::map<std::string, Relation> rels;
  for (const auto& [name, arity] : sig) rels.emplace(name, Relation{arity, {}});
  return Structure({}, std::move(rels));
}

inline StructureMap bang(const Structure& s) {
  return {s, terminal(s.signature()), Function(s.size(), 0)};
}

struct Coproduct {
  Structure sum;
  StructureMap inl;  // first coprojection
  StructureMap inr;  // second coprojection
};

/// Tagged disjoint union; each relation is the union of the two embedded relations.
inline Coproduct coproduct(const Structure& a, const Structure& b) {
  require_same_signature(a, b, "coproduct");
  const std::size_t n = a.size();
  std::vector<std::string> labels;
  labels.reserve(n + b.size());
  for (const auto& l : a.universe()) labels.push_back("(" + l + ",1)");
  for (const auto& l : b.universe()) labels.push_back("(" + l + ",2)");

  std::map<std::string, Relation> rels;
  for (const auto& [name, rel] : a.relations()) {
    Relation r{rel.arity, rel.tuples};
    for (Tuple t : b.relation(name)->tuples) {
      for (Point& p : t) p += n;
      r.tuples.insert(std::move(t));
    }
    rels.emplace(name, std::move(r));
  }
  Structure sum(std::move(labels), std::move(rels));

  Function left(n), right(b.size());
  std::iota(left.begin(), left.end(), Point{0});
  std::iota(right.begin(), right.end(), n);
  StructureMap inl{a, sum, std::move(left)};
  StructureMap inr{b, sum, std::move(right)};
  return {std::move(sum), std::move(inl), std::move(inr)};
}

/// [p, q]: case split on the tag of a point of p.domain + q.domain.
inline StructureMap cotuple(const StructureMap& p, const StructureMap& q) {
  if (!(p.codomain == q.codomain)) throw UniverseMismatch("cotuple: maps have different codomains");
  Function h = p.image;
  h.insert(h.end(), q.image.begin(), q.image.end());
  return {coproduct(p.domain, q.domain).sum, p.codomain, std::move(h)};
}

/// f + g := [inl . f, inr . g].
inline StructureMap sum_map(const StructureMap& f, const StructureMap& g) {
  Coproduct target = coproduct(f.codomain, g.codomain);
  return cotuple(compose(target.inl, f), compose(target.inr, g));
}

/// Backtracking search for a homomorphism a -> b.
///
/// Domain points are assigned in order of descending degree (ties by index);
/// candidates are tried in universe order, so the result is deterministic.
inline std::optional<Function> find_homomorphism(const Structure& a, const Structure& b) {
  require_same_signature(a, b, "find_classical_hom");
  const std::size_t n = a.size();

  std::vector<std::size_t> degree(n, 0);
  for (const auto& [name, rel] : a.relations())
    for (const Tuple& t : rel.tuples)
      for (Point p : t) ++degree[p];
  std::vector<Point> order(n);
  std::iota(order.begin(), order.end(), Point{0});
  std::stable_sort(order.begin(), order.end(), [&](Point x, Point y) { return degree[x] > degree[y]; });
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;

  // Each tuple is checked once, when its last point (in search order) is assigned.
  struct Constraint {
    const Relation* target;
    const Tuple* tuple;
  };
  std::vector<std::vector<Constraint>> due(n);
  for (const auto& [name, rel] : a.relations())
    for (const Tuple& t : rel.tuples) {
      std::size_t last = 0;
      for (Point p : t) last = std::max(last, position[p]);
      due[last].push_back({b.relation(name), &t});
    }

  if (n > 0 && b.size() == 0) return std::nullopt;
  Function f(n, 0);
  Tuple image;
  auto consistent = [&](std::size_t k) {
    for (const Constraint& c : due[k]) {
      image.resize(c.tuple->size());
      for (std::size_t i = 0; i < image.size(); ++i) image[i] = f[(*c.tuple)[i]];
      if (!c.target->tuples.count(image)) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, std::size_t k) -> bool {
    if (k == n) return true;
    for (Point w = 0; w < b.size(); ++w) {
      f[order[k]] = w;
      if (consistent(k) && self(self, k + 1)) return true;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return f;
}

inline std::optional<StructureMap> find_classical_hom(const Structure& a, const Structure& b) {
  auto f = find_homomorphism(a, b);
  if (!f) return std::nullopt;
  return StructureMap{a, b, std::move(*f)};
}

}  // namespace qeff
