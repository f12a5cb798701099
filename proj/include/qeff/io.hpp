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

// JSON file formats.
//
//   structure   {"universe": [..], "relations": {"E": {"arity": 2, "tuples": [[..], ..]}}}
//               {"graph": {"vertices": [..], "edges": [[u, v], ..]}}
//   matrix      [[[re, im], ..], ..]                    rows of complex entries
//   family      {"grade": d, "entries": {"v|w": matrix, ..}}   missing entries are zero
//   strategy    {"state": [[re, im], ..], "alice": family, "bob": family}
//   map         {"map": {"src": "dst", ..}}
//   questions   {"weights": {"v1|v2": number, ..}}      missing pairs weigh zero
//   weights     {"grade": d, "entries": {"x": value}} or {"a|b": value} for Kleisli maps;
//               a value is a matrix (proj), a number (prob) or 0/1/true/false (bool)

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qeff/effectus_laws.hpp"
#include "qeff/errors.hpp"
#include "qeff/kleisli.hpp"
#include "qeff/linalg.hpp"
#include "qeff/partial_semiring.hpp"
#include "qeff/quantum_games.hpp"
#include "qeff/rstruct.hpp"
#include "qeff/state_logic.hpp"

namespace qeff {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input file content.
class ParseError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string as_label(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  bad(where, "expected a label");
}

inline double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(where, "non-finite number");
  return x;
}

inline std::size_t as_grade(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) bad(where, "grade must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

// Rounding noise below this prints as an exact zero.
inline double clean(double x) { return std::abs(x) < 1e-15 ? 0.0 : x; }

inline std::pair<std::string, std::string> split_pair(const std::string& key, const std::string& where) {
  const auto bar = key.find('|');
  if (bar == std::string::npos || key.find('|', bar + 1) != std::string::npos)
    bad(where, "key \"" + key + "\" is not of the form \"a|b\"");
  return {key.substr(0, bar), key.substr(bar + 1)};
}

inline Point lookup(const Structure& s, const std::string& label, const std::string& where) {
  auto p = s.find(label);
  if (!p) bad(where, "unknown label \"" + label + "\"");
  return *p;
}

}  // namespace detail

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ":" + detail::line_col(text, e.byte) + ": " + e.what());
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot write file");
  out << j.dump(2) << '\n';
}

// ---- structures ----

inline Structure structure_from_json(const Json& j, const std::string& where = "structure") {
  try {
    if (j.is_object() && j.contains("graph")) {
      const Json& g = j["graph"];
      std::vector<std::string> vertices;
      for (const Json& v : detail::field(g, "vertices", where)) vertices.push_back(detail::as_label(v, where));
      std::vector<std::pair<std::string, std::string>> edges;
      for (const Json& e : detail::field(g, "edges", where)) {
        if (!e.is_array() || e.size() != 2) detail::bad(where, "an edge must be a pair");
        edges.emplace_back(detail::as_label(e[0], where), detail::as_label(e[1], where));
      }
      return Graph::from_edges(vertices, edges).structure();
    }
    std::vector<std::string> universe;
    for (const Json& x : detail::field(j, "universe", where)) universe.push_back(detail::as_label(x, where));
    std::map<std::string, std::pair<std::size_t, std::vector<std::vector<std::string>>>> relations;
    if (j.contains("relations")) {
      const Json& rels = j["relations"];
      if (!rels.is_object()) detail::bad(where, "\"relations\" must be an object");
      for (const auto& [name, body] : rels.items()) {
        const std::string at = where + ": relation " + name;
        const Json& arity = detail::field(body, "arity", at);
        if (!arity.is_number_integer() || arity.get<long long>() < 1) detail::bad(at, "arity must be a positive integer");
        std::vector<std::vector<std::string>> tuples;
        for (const Json& t : detail::field(body, "tuples", at)) {
          if (!t.is_array()) detail::bad(at, "a tuple must be a list");
          std::vector<std::string> row;
          for (const Json& x : t) row.push_back(detail::as_label(x, at));
          tuples.push_back(std::move(row));
        }
        relations[name] = {static_cast<std::size_t>(arity.get<long long>()), std::move(tuples)};
      }
    }
    return Structure::from_labels(universe, relations);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline Json structure_to_json(const Structure& s) {
  Json j;
  j["universe"] = Json::array();
  for (Point x = 0; x < s.size(); ++x) j["universe"].push_back(s.label(x));
  j["relations"] = Json::object();
  for (const auto& [name, rel] : s.relations()) {
    Json tuples = Json::array();
    for (const Tuple& t : rel.tuples) {
      Json row = Json::array();
      for (Point x : t) row.push_back(s.label(x));
      tuples.push_back(std::move(row));
    }
    j["relations"][name] = {{"arity", rel.arity}, {"tuples", std::move(tuples)}};
  }
  return j;
}

/// Graph form: each undirected edge listed once, endpoints in universe order.
inline Json graph_to_json(const Graph& g) {
  const Structure& s = g.structure();
  Json vertices = Json::array(), edges = Json::array();
  for (Point v = 0; v < s.size(); ++v) vertices.push_back(s.label(v));
  for (Point v = 0; v < s.size(); ++v)
    for (Point w = v + 1; w < s.size(); ++w)
      if (g.adjacent(v, w)) edges.push_back(Json::array({s.label(v), s.label(w)}));
  return {{"graph", {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}}}};
}

inline Graph graph_from_json(const Json& j, const std::string& where = "graph") {
  Structure s = structure_from_json(j, where);
  try {
    return Graph(std::move(s));
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

inline Structure load_structure(const std::string& path) { return structure_from_json(load_json(path), path); }
inline Graph load_graph(const std::string& path) { return graph_from_json(load_json(path), path); }

// ---- matrices ----

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {detail::as_number(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) detail::bad(where, "a complex entry must be [re, im]");
  return {detail::as_number(j[0], where), detail::as_number(j[1], where)};
}

inline Json complex_to_json(Complex z) { return Json::array({detail::clean(z.real()), detail::clean(z.imag())}); }

inline Matrix matrix_from_json(const Json& j, const std::string& where = "matrix") {
  if (!j.is_array() || j.empty()) detail::bad(where, "a matrix must be a non-empty list of rows");
  const std::size_t n = j.size();
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != n)
      detail::bad(where, "row " + std::to_string(i) + " does not have " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k)
      entries.push_back(complex_from_json(row[k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
  }
  return Matrix(n, std::move(entries));
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline StateVector state_vector_from_json(const Json& j, const std::string& where = "state") {
  if (!j.is_array() || j.empty()) detail::bad(where, "a state must be a non-empty list of [re, im]");
  StateVector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json state_vector_to_json(const StateVector& psi) {
  Json out = Json::array();
  for (const Complex& z : psi) out.push_back(complex_to_json(z));
  return out;
}

// ---- matrix families indexed by (v, w) ----

/// Reads {"grade", "entries": {"v|w": matrix}} into the row-major family v * |H| + w.
inline std::pair<std::size_t, std::vector<Matrix>> pair_family_from_json(const Json& j, const Structure& g,
                                                                          const Structure& h,
                                                                          const std::string& where) {
  const std::size_t d = detail::as_grade(detail::field(j, "grade", where), where + ": grade");
  std::vector<Matrix> family(g.size() * h.size(), Matrix::zero(d));
  const Json& entries = detail::field(j, "entries", where);
  if (!entries.is_object()) detail::bad(where, "\"entries\" must be an object");
  for (const auto& [key, value] : entries.items()) {
    const std::string at = where + ": entry " + key;
    auto [v, w] = detail::split_pair(key, at);
    Matrix m = [&] {
      try {
        return matrix_from_json(value, at);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(at + ": " + e.what());
      }
    }();
    if (m.dim() != d) detail::bad(at, "matrix is " + std::to_string(m.dim()) + "x" + std::to_string(m.dim()) +
                                          ", expected grade " + std::to_string(d));
    family[detail::lookup(g, v, at) * h.size() + detail::lookup(h, w, at)] = std::move(m);
  }
  return {d, std::move(family)};
}

inline Json pair_family_to_json(std::size_t grade, const std::vector<Matrix>& family, const Structure& g,
                                const Structure& h) {
  Json entries = Json::object();
  for (Point v = 0; v < g.size(); ++v)
    for (Point w = 0; w < h.size(); ++w) {
      const Matrix& m = family.at(v * h.size() + w);
      if (!is_zero(m, 0.0)) entries[g.label(v) + "|" + h.label(w)] = matrix_to_json(m);
    }
  return {{"grade", grade}, {"entries", std::move(entries)}};
}

inline QuantumHomomorphism qhom_from_json(const Json& j, const Graph& g, const Graph& h, double tol,
                                          const std::string& where = "qhom") {
  auto [d, family] = pair_family_from_json(j, g.structure(), h.structure(), where);
  return {g, h, d, std::move(family), tol};
}

inline Json qhom_to_json(const QuantumHomomorphism& q) {
  return pair_family_to_json(q.grade, q.family, q.source.structure(), q.target.structure());
}

inline PerfectStrategy strategy_from_json(const Json& j, const Graph& g, const Graph& h, double tol,
                                          const std::string& where = "strategy") {
  StateVector psi = state_vector_from_json(detail::field(j, "state", where), where + ": state");
  auto [da, alice] = pair_family_from_json(detail::field(j, "alice", where), g.structure(), h.structure(), where + ": alice");
  auto [db, bob] = pair_family_from_json(detail::field(j, "bob", where), g.structure(), h.structure(), where + ": bob");
  if (psi.size() != da * db)
    detail::bad(where, "state has " + std::to_string(psi.size()) + " amplitudes, expected " + std::to_string(da * db));
  return {g, h, std::move(psi), da, db, std::move(alice), std::move(bob), tol};
}

inline Json strategy_to_json(const PerfectStrategy& s) {
  Json j;
  j["state"] = state_vector_to_json(s.state);
  j["alice"] = pair_family_to_json(s.dim_a, s.alice, s.source.structure(), s.target.structure());
  j["bob"] = pair_family_to_json(s.dim_b, s.bob, s.source.structure(), s.target.structure());
  return j;
}

// ---- maps and question distributions ----

inline StructureMap map_from_json(const Json& j, const Structure& src, const Structure& dst,
                                  const std::string& where = "map") {
  const Json& body = detail::field(j, "map", where);
  if (!body.is_object()) detail::bad(where, "\"map\" must be an object");
  Function f(src.size(), dst.size());
  for (const auto& [key, value] : body.items()) {
    const Point x = detail::lookup(src, key, where);
    f[x] = detail::lookup(dst, detail::as_label(value, where), where);
  }
  for (Point x = 0; x < src.size(); ++x)
    if (f[x] == dst.size()) detail::bad(where, "no image for \"" + src.label(x) + "\"");
  return StructureMap::make(src, dst, std::move(f));
}

inline Json map_to_json(const StructureMap& f) {
  Json body = Json::object();
  for (Point x = 0; x < f.domain.size(); ++x) body[f.domain.label(x)] = f.codomain.label(f.image[x]);
  return {{"map", std::move(body)}};
}

inline QuestionDistribution questions_from_json(const Json& j, const Structure& g,
                                                const std::string& where = "questions") {
  const Json& weights = detail::field(j, "weights", where);
  if (!weights.is_object()) detail::bad(where, "\"weights\" must be an object");
  QuestionDistribution q{g.size(), std::vector<double>(g.size() * g.size(), 0.0)};
  for (const auto& [key, value] : weights.items()) {
    auto [a, b] = detail::split_pair(key, where);
    q.weights[detail::lookup(g, a, where) * g.size() + detail::lookup(g, b, where)] = detail::as_number(value, where);
  }
  return q;
}

inline Json questions_to_json(const QuestionDistribution& q, const Structure& g) {
  Json weights = Json::object();
  for (Point a = 0; a < q.n; ++a)
    for (Point b = 0; b < q.n; ++b)
      if (q.weights[a * q.n + b] != 0.0) weights[g.label(a) + "|" + g.label(b)] = q.weights[a * q.n + b];
  return {{"weights", std::move(weights)}};
}

// ---- semiring values ----

inline bool value_from_json(const BooleanSemiring&, const Json& j, std::size_t, const std::string& where) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer() && (j.get<long long>() == 0 || j.get<long long>() == 1)) return j.get<long long>() == 1;
  detail::bad(where, "expected 0, 1, true or false");
}

inline double value_from_json(const UnitIntervalSemiring&, const Json& j, std::size_t, const std::string& where) {
  return detail::as_number(j, where);
}

inline Matrix value_from_json(const ProjectionSemiring&, const Json& j, std::size_t grade, const std::string& where) {
  Matrix m = [&] {
    try {
      return matrix_from_json(j, where);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }();
  if (m.dim() != grade) detail::bad(where, "matrix does not match grade " + std::to_string(grade));
  return m;
}

inline Json value_to_json(bool b) { return b ? 1 : 0; }
inline Json value_to_json(double x) { return detail::clean(x); }
inline Json value_to_json(const Matrix& m) { return matrix_to_json(m); }

namespace detail {

template <PartialSemiring S>
std::size_t grade_field(const S&, const Json& j, const std::string& where) {
  if (!j.contains("grade")) {
    if constexpr (S::kScalar) return 1;
    bad(where, "missing \"grade\"");
  }
  return as_grade(j["grade"], where + ": grade");
}

}  // namespace detail

/// {"grade", "entries": {"x": value}} as a distribution over `structure`.
template <PartialSemiring S>
State<S> state_from_json(const S& s, const Json& j, const Structure& structure, const std::string& where = "state") {
  const std::size_t d = detail::grade_field(s, j, where);
  const Json& entries = detail::field(j, "entries", where);
  if (!entries.is_object()) detail::bad(where, "\"entries\" must be an object");
  typename Distribution<S>::Weights w;
  for (const auto& [key, value] : entries.items())
    w.emplace_back(detail::lookup(structure, key, where), value_from_json(s, value, d, where + ": entry " + key));
  try {
    return make_state(structure, Distribution<S>::make(s, structure.size(), d, std::move(w)));
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

template <PartialSemiring S>
Json state_to_json(const State<S>& p) {
  Json entries = Json::object();
  for (const auto& [x, w] : p.distribution.support()) entries[p.structure.label(x)] = value_to_json(w);
  return {{"grade", p.grade()}, {"entries", std::move(entries)}};
}

/// {"grade", "entries": {"x": value}}; missing points carry zero.
template <PartialSemiring S>
Predicate<S> predicate_from_json(const S& s, const Json& j, const Structure& structure,
                                 const std::string& where = "predicate") {
  const std::size_t d = detail::grade_field(s, j, where);
  const Json& entries = detail::field(j, "entries", where);
  if (!entries.is_object()) detail::bad(where, "\"entries\" must be an object");
  std::vector<typename S::value_type> values(structure.size(), s.zero(d));
  for (const auto& [key, value] : entries.items())
    values[detail::lookup(structure, key, where)] = value_from_json(s, value, d, where + ": entry " + key);
  try {
    return make_predicate(s, structure, d, std::move(values));
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

template <PartialSemiring S>
Json predicate_to_json(const Predicate<S>& q) {
  Json entries = Json::object();
  for (Point x = 0; x < q.values.size(); ++x)
    if (!q.semiring.is_zero(q.values[x])) entries[q.structure.label(x)] = value_to_json(q.values[x]);
  return {{"grade", q.grade}, {"entries", std::move(entries)}};
}

/// {"grade", "entries": {"a|b": value}}: row a of a Kleisli map A -> T(B).
template <PartialSemiring S>
KleisliMap<S> kleisli_from_json(const S& s, const Json& j, const Structure& a, const Structure& b,
                                const std::string& where = "kleisli map") {
  const std::size_t d = detail::grade_field(s, j, where);
  const Json& entries = detail::field(j, "entries", where);
  if (!entries.is_object()) detail::bad(where, "\"entries\" must be an object");
  std::vector<typename Distribution<S>::Weights> rows(a.size());
  for (const auto& [key, value] : entries.items()) {
    auto [x, y] = detail::split_pair(key, where);
    rows[detail::lookup(a, x, where)].emplace_back(detail::lookup(b, y, where),
                                                   value_from_json(s, value, d, where + ": entry " + key));
  }
  std::vector<Distribution<S>> dists;
  for (Point x = 0; x < a.size(); ++x) {
    try {
      dists.push_back(Distribution<S>::make(s, b.size(), d, std::move(rows[x])));
    } catch (const Error& e) {
      throw ParseError(where + ": row " + a.label(x) + ": " + e.what());
    }
  }
  return KleisliMap<S>(s, a, b, d, std::move(dists));
}

template <PartialSemiring S>
Json kleisli_to_json(const KleisliMap<S>& f) {
  Json entries = Json::object();
  for (Point x = 0; x < f.domain().size(); ++x)
    for (const auto& [y, w] : f(x).support())
      entries[f.domain().label(x) + "|" + f.codomain().label(y)] = value_to_json(w);
  return {{"grade", f.grade()}, {"entries", std::move(entries)}};
}

// ---- reports ----

inline Json law_report_to_json(const LawReport& r) {
  Json config;
  Json instances = Json::array();
  for (Instance i : r.config.instances) instances.push_back(instance_name(i));
  config["instances"] = std::move(instances);
  config["max_size"] = r.config.max_size;
  config["grades"] = r.config.grades;
  config["monad_grades"] = r.config.monad_grades;
  config["trials"] = r.config.trials;
  config["seed"] = r.config.seed;
  config["tol"] = r.config.tol;
  config["exhaustive"] = r.config.exhaustive;
  Json out;
  out["config"] = std::move(config);
  out["instances"] = Json::array();
  for (const InstanceReport& ir : r.instances) {
    Json laws = Json::array();
    for (const LawStats& l : ir.laws)
      laws.push_back({{"law", l.law},
                      {"passed", l.passed},
                      {"failed", l.failed},
                      {"max_residual", std::isfinite(l.max_residual) ? Json(l.max_residual) : Json("inf")},
                      {"failing_trials", l.failing_trials}});
    out["instances"].push_back(
        {{"instance", ir.instance}, {"grade", ir.grade}, {"failures", ir.failures()}, {"laws", std::move(laws)}});
  }
  out["failures"] = r.failures();
  return out;
}

}  // namespace qeff
