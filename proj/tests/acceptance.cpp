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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "graph_enum.hpp"
#include "qeff/effectus_laws.hpp"
#include "qeff/kleisli.hpp"
#include "qeff/quantum_games.hpp"
#include "qeff/random.hpp"
#include "qeff/state_logic.hpp"

namespace {

using namespace qeff;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void run(const char* id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::string timing;
  if (limit_s > 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s (limit %.0f s)", secs, limit_s);
    timing = buf;
    if (secs >= limit_s) o.ok = false;
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", secs);
    timing = buf;
  }
  if (!o.ok) ++failures;
  std::printf("%s %s %s: %s; %s\n", id, o.ok ? "PASS" : "FAIL", title, o.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

std::string sci(double x) { return format_residual(x); }

// Laws that a squares run must report with zero failures.
const char* const kSquareLaws[] = {"generation.valid",  "squares.commute",       "square1.commutes",
                                   "square1.mediator_exists", "square1.recovery", "square1.uniqueness",
                                   "square1.hypothesis_checked", "square2.commutes", "square2.mediator_exists",
                                   "square2.recovery",  "square2.uniqueness",    "square2.hypothesis_checked",
                                   "joint_monicity"};

Outcome law_instance(Instance inst, std::size_t grade, bool need_exhaustive) {
  LawConfig cfg;
  cfg.instances = {inst};
  cfg.grades = {grade};
  cfg.trials = 200;
  cfg.max_size = 3;
  cfg.seed = 0;
  const LawReport r = run_law_suite(cfg);
  Outcome o;
  std::size_t checks = 0;
  for (const InstanceReport& ir : r.instances) {
    for (const LawStats& l : ir.laws) checks += l.passed + l.failed;
    for (const char* law : kSquareLaws) {
      const LawStats* l = ir.find(law);
      if (!l || l->passed == 0) {
        o.ok = false;
        o.detail += std::string("missing ") + law + "; ";
      }
    }
    if (need_exhaustive)
      for (const char* law : {"exhaustive.square1", "exhaustive.square2", "exhaustive.joint_monicity"})
        if (const LawStats* l = ir.find(law); !l || l->passed == 0) {
          o.ok = false;
          o.detail += std::string("missing ") + law + "; ";
        }
  }
  const double residual = r.instances.empty() ? 0.0 : r.instances.front().max_residual();
  if (r.failures() != 0 || residual > 1e-9) o.ok = false;
  o.detail += std::to_string(r.failures()) + " failures over " + std::to_string(checks) +
              " checks (200 trials, sizes <= 3), max residual " + sci(residual);
  return o;
}

Outcome graded_monad_laws() {
  const ProjectionSemiring p;
  double worst = 0.0;
  std::size_t combos_seen = 0;
  std::vector<bool> combos(8, false);
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(0xac4, t);
    const std::size_t n = 1 + uniform_index(rng, 3);
    const std::size_t d = 1 + t % 2, d1 = 1 + (t / 2) % 2, d2 = 1 + (t / 4) % 2;
    combos[(d - 1) * 4 + (d1 - 1) * 2 + (d2 - 1)] = true;
    const auto q = random_distribution(p, n, d, rng);
    worst = std::max(worst, distance(graded_mu(p, map_unit(q), d), q));
    worst = std::max(worst, distance(graded_mu(p, unit_of(q), 1), q));
    Mixture<ProjectionSemiring, Mixture<ProjectionSemiring, Distribution<ProjectionSemiring>>> nested;
    const auto outer = random_distribution(p, 1 + uniform_index(rng, 3), d, rng);
    for (const auto& [i, w] : outer.support()) {
      (void)i;
      Mixture<ProjectionSemiring, Distribution<ProjectionSemiring>> middle;
      const auto inner = random_distribution(p, 1 + uniform_index(rng, 3), d1, rng);
      for (const auto& [j, v] : inner.support()) {
        (void)j;
        middle.emplace_back(v, random_distribution(p, n, d2, rng));
      }
      nested.emplace_back(w, std::move(middle));
    }
    const auto inner_first = graded_mu(
        p,
        map_mixture(nested,
                    [&](const Mixture<ProjectionSemiring, Distribution<ProjectionSemiring>>& m) {
                      return graded_mu(p, m, d1);
                    }),
        d);
    const auto outer_first = graded_mu(p, join_mixture(p, nested), d * d1);
    worst = std::max(worst, distance(inner_first, outer_first));
  }
  for (bool b : combos) combos_seen += b;
  return {worst <= 1e-9 && combos_seen == 8,
          "100 instances, " + std::to_string(combos_seen) + "/8 grade triples, max residual " + sci(worst)};
}

Outcome q1_correspondence() {
  const auto graphs = testing::labelled_graphs(4);
  std::size_t checked = 0, disagreements = 0;
  for (const Graph& g : graphs)
    for (const Graph& h : graphs)
      testing::for_each_function(g.size(), h.size(), [&](const Function& f) {
        std::vector<Matrix> family(g.size() * h.size(), Matrix::zero(1));
        for (Point v = 0; v < g.size(); ++v) family[v * h.size() + f[v]] = Matrix::identity(1);
        const bool quantum = bool(verify_quantum_homomorphism({g, h, 1, std::move(family)}));
        const bool classical = bool(is_homomorphism(g.structure(), h.structure(), f));
        disagreements += quantum != classical;
        ++checked;
      });
  return {disagreements == 0, std::to_string(disagreements) + " disagreements over " + std::to_string(checked) +
                                  " functions between " + std::to_string(graphs.size()) + " labelled graphs"};
}

std::vector<Function> homs(const Graph& g, const Graph& h) {
  std::vector<Function> out;
  testing::for_each_function(g.size(), h.size(), [&](const Function& f) {
    if (is_homomorphism(g.structure(), h.structure(), f)) out.push_back(f);
  });
  return out;
}

Outcome strategy_round_trip() {
  const std::vector<std::pair<Graph, Graph>> pairs{{cycle_graph(5), complete_graph(3)},
                                                   {cycle_graph(6), complete_graph(2)},
                                                   {complete_graph(3), complete_graph(4)},
                                                   {cycle_graph(7), complete_graph(3)},
                                                   {cycle_graph(4), cycle_graph(5)}};
  std::size_t made = 0, perfect = 0;
  double worst = 0.0;
  for (std::uint64_t t = 0; made < 50; ++t) {
    Rng rng = trial_rng(0xac6, t);
    const auto& [g, h] = pairs[t % pairs.size()];
    const auto hs = homs(g, h);
    if (hs.empty()) continue;
    auto pick = [&] { return hs[uniform_index(rng, hs.size())]; };
    const QuantumHomomorphism q = t % 3 == 0   ? qhom_from_classical(g, h, pick(), 1)
                                  : t % 3 == 1 ? qhom_from_classical(g, h, pick(), 2)
                                               : qhom_block_diagonal(g, h, {pick(), pick()});
    if (!verify_quantum_homomorphism(q)) return {false, "constructed family failed verification"};
    ++made;
    const PerfectStrategy s = strategy_from_qhom(q);
    const double win = evaluate_game(s, uniform_questions(g.size())).win_probability;
    worst = std::max(worst, std::abs(win - 1.0));
    if (verify_perfect_strategy(s) && std::abs(win - 1.0) <= 1e-9) ++perfect;
  }
  return {perfect == 50, std::to_string(perfect) + "/50 strategies perfect, max |win - 1| " + sci(worst)};
}

// Straight from the rules: equal questions need equal answers, adjacent questions adjacent answers.
bool round_won(const Graph& g, const Graph& h, Point v1, Point v2, Point w1, Point w2) {
  const bool same_ok = v1 != v2 || w1 == w2;
  const bool edge_ok = !g.structure().holds("E", {v1, v2}) || h.structure().holds("E", {w1, w2});
  return same_ok && edge_ok;
}

Outcome game_oracle() {
  std::vector<Graph> graphs;
  for (const Graph& g : testing::labelled_graphs(3))
    if (g.size() > 0) graphs.push_back(g);
  std::size_t compared = 0, mismatches = 0;
  std::uint64_t trial = 0;
  for (const Graph& g : graphs)
    for (const Graph& h : graphs) {
      const std::size_t n = g.size();
      Rng rng = trial_rng(0xac7, trial++);
      const std::vector<QuestionDistribution> dists{uniform_questions(n), {n, random_probabilities(n * n, rng)}};
      testing::for_each_function(n, h.size(), [&](const Function& alice) {
        testing::for_each_function(n, h.size(), [&](const Function& bob) {
          const PerfectStrategy s = deterministic_strategy(g, h, alice, bob);
          for (const QuestionDistribution& qd : dists) {
            double brute = 0.0;
            for (Point v1 = 0; v1 < n; ++v1)
              for (Point v2 = 0; v2 < n; ++v2)
                brute += qd.weights[v1 * n + v2] * (round_won(g, h, v1, v2, alice[v1], bob[v2]) ? 1.0 : 0.0);
            mismatches += evaluate_game(s, qd).win_probability != brute;
            ++compared;
          }
        });
      });
    }
  const Graph k2 = complete_graph(2), k1 = complete_graph(1);
  const double k2k1 = evaluate_game(deterministic_strategy(k2, k1, {0, 0}, {0, 0}), uniform_questions(2)).win_probability;
  return {mismatches == 0 && k2k1 == 0.5, std::to_string(mismatches) + " mismatches over " + std::to_string(compared) +
                                              " strategy/distribution pairs; K2 -> K1 value " + sci(k2k1)};
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
Predicate<S> random_predicate(const S& s, const Structure& a, std::size_t grade, Rng& rng) {
  auto v = random_predicate_values(s, a.size(), grade, rng);
  return make_predicate(s, a, grade, std::vector<typename S::value_type>(v.begin(), v.end()));
}

template <class S>
std::pair<std::size_t, double> conditioning_trials(const S& s, std::uint64_t salt) {
  std::size_t done = 0;
  double worst = 0.0;
  for (std::uint64_t t = 0; done < 100 && t < 1000; ++t) {
    Rng rng = trial_rng(0xac8 + salt, t);
    const Structure a = random_structure(1 + uniform_index(rng, 3), rng);
    const std::size_t d = S::kScalar ? 1 : 1 + t % 2, d2 = S::kScalar ? 1 : 1 + (t / 2) % 2;
    const State<S> p = make_state(a, random_distribution(s, a.size(), d, rng));
    const Predicate<S> q = random_predicate(s, a, d2, rng);
    if (s.is_zero(validity(p, q))) continue;
    worst = std::max(worst, conditioning_residual(s, condition(p, q)));
    ++done;
  }
  return {done, worst};
}

Outcome table_consistency() {
  const BooleanSemiring b;
  const UnitIntervalSemiring p;
  const ProjectionSemiring m;
  std::size_t cases = 0, disagreements = 0, non_projection = 0;
  for (std::uint64_t t = 0; t < 60; ++t) {
    Rng rng = trial_rng(0xac8, t);
    const Structure a = random_structure(1 + uniform_index(rng, 4), rng);
    const Point x = uniform_index(rng, a.size());
    std::vector<bool> subset(a.size());
    for (std::size_t i = 0; i < subset.size(); ++i) subset[i] = uniform01(rng) < 0.5;
    const bool member = subset[x];
    const bool vb = validity(point_state(b, a, x), subset_predicate(b, a, subset));
    const auto vp = sharp_value(p, validity(point_state(p, a, x), subset_predicate(p, a, subset)));
    bool agree = vb == member && vp == member;
    for (std::size_t d : {1, 2}) {
      const Matrix vm = validity(point_state(m, a, x, d), subset_predicate(m, a, subset, d));
      non_projection += !is_projection(vm, 1e-9);
      agree = agree && sharp_value(m, vm) == member;
    }
    disagreements += !agree;
    ++cases;
  }
  // Random projection-valued data with commuting predicates on related points.
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(0xac8 + 1, t);
    const Structure a = random_structure(1 + uniform_index(rng, 3), rng);
    const State<ProjectionSemiring> s = make_state(a, random_distribution(m, a.size(), 1 + t % 2, rng));
    non_projection += !is_projection(validity(s, random_predicate(m, a, 1 + (t / 2) % 2, rng)), 1e-9);
  }
  const auto [nb, rb] = conditioning_trials(b, 10);
  const auto [np, rp] = conditioning_trials(p, 20);
  const auto [nm, rm] = conditioning_trials(m, 30);
  const double worst = std::max({rb, rp, rm});
  const bool ok = cases >= 50 && disagreements == 0 && non_projection == 0 && nb == 100 && np == 100 && nm == 100 &&
                  worst <= 1e-9;
  return {ok, std::to_string(disagreements) + " verdict disagreements over " + std::to_string(cases) + " cases, " +
                  std::to_string(non_projection) + " non-projection validities, conditioning trials " +
                  std::to_string(nb) + "/" + std::to_string(np) + "/" + std::to_string(nm) + " with max residual " +
                  sci(worst)};
}

template <class S>
double duality_trials(const S& s, std::uint64_t salt) {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng = trial_rng(0xac9 + salt, t);
    // Pred(f)(q) need not commute along relations of X for arbitrary f, so X is a bare set.
    std::vector<std::string> xs;
    for (std::size_t i = 1 + uniform_index(rng, 3); i > 0; --i) xs.push_back("x" + std::to_string(xs.size()));
    const Structure x = Structure::set(xs);
    const Structure y = random_structure(1 + uniform_index(rng, 3), rng);
    const std::size_t d = S::kScalar ? 1 : 1 + t % 2, df = S::kScalar ? 1 : 1 + (t / 2) % 2,
                      dq = S::kScalar ? 1 : 1 + (t / 4) % 2;
    const State<S> p = make_state(x, random_distribution(s, x.size(), d, rng));
    const KleisliMap<S> f = random_kleisli_map(s, x, y, df, rng);
    const Predicate<S> q = random_predicate(s, y, dq, rng);
    worst = std::max(worst, s.distance(validity(stat_transform(f, p), q), validity(p, pred_transform(f, q))));
  }
  return worst;
}

Outcome duality() {
  const double rb = duality_trials(BooleanSemiring{}, 1);
  const double rp = duality_trials(UnitIntervalSemiring{}, 2);
  const double rm = duality_trials(ProjectionSemiring{}, 3);
  return {std::max({rb, rp, rm}) <= 1e-9,
          "100 trials per instance, max residual bool " + sci(rb) + ", prob " + sci(rp) + ", proj " + sci(rm)};
}

}  // namespace

int main() {
  run("AC1", "effectus laws, boolean instance", 10, [] { return law_instance(Instance::Boolean, 1, true); });
  run("AC2", "effectus laws, unit-interval instance", 30, [] { return law_instance(Instance::UnitInterval, 1, false); });
  run("AC3", "effectus laws, projection instance d=2", 120, [] { return law_instance(Instance::Projection, 2, false); });
  run("AC4", "graded-monad unit and associativity laws", 0, graded_monad_laws);
  run("AC5", "grade-1 quantum vs classical homomorphisms, graphs <= 4 vertices", 60, q1_correspondence);
  run("AC6", "quantum homomorphism to perfect strategy round trip", 0, strategy_round_trip);
  run("AC7", "game evaluation vs brute-force enumeration", 0, game_oracle);
  run("AC8", "deterministic data agrees across instances; conditioning resolves support", 0, table_consistency);
  run("AC9", "validity-transformer duality", 0, duality);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
