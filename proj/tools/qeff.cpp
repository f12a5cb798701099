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

// qeff: command-line front end.
//
// Exit status: 0 when the check passes, 1 when it fails (a witness is printed),
// 2 on malformed input or usage errors.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qeff/effectus_laws.hpp"
#include "qeff/errors.hpp"
#include "qeff/io.hpp"
#include "qeff/kleisli.hpp"
#include "qeff/partial_semiring.hpp"
#include "qeff/quantum_games.hpp"
#include "qeff/rstruct.hpp"
#include "qeff/state_logic.hpp"

namespace {

using namespace qeff;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

struct Options {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::size_t trials = 200;
  std::string question_dist = "uniform";
  std::vector<std::string> instances;
  std::size_t grade = 0;
  std::size_t max_size = 3;
  bool json = false;
  std::string out;
  std::vector<std::string> files;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string tuple_labels(const Structure& s, const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + s.label(t[i]);
  return out + ")";
}

int emit(const Options& o, bool ok, const std::string& what, const std::string& witness, Json extra = Json::object()) {
  if (o.json) {
    Json j;
    j["ok"] = ok;
    j["check"] = what;
    if (!ok) j["witness"] = witness;
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << what << ": " << (ok ? "pass" : "fail") << '\n';
    if (!ok) std::cout << "witness: " << witness << '\n';
  }
  return ok ? kPass : kFail;
}

void need_files(const Options& o, std::size_t n, const char* usage) {
  if (o.files.size() != n) throw InvalidInput(std::string("usage: ") + usage);
}

Instance single_instance(const Options& o) {
  if (o.instances.size() != 1) throw InvalidInput("exactly one --instance is required");
  return parse_instance(o.instances.front());
}

std::string game_witness(const GameCheck& c) {
  std::string w = c.failure->message;
  w += " [condition " + std::to_string(c.failure->condition) + ", residual " + format_residual(c.failure->residual) + "]";
  return w;
}

int cmd_verify_hom(const Options& o) {
  need_files(o, 3, "verify-hom SRC DST MAP");
  const Structure src = load_structure(o.files[0]);
  const Structure dst = load_structure(o.files[1]);
  const StructureMap f = map_from_json(load_json(o.files[2]), src, dst, o.files[2]);
  const HomCheck c = is_homomorphism(f);
  std::string witness;
  if (!c) {
    Tuple image;
    for (Point x : c.violation->tuple) image.push_back(f.image[x]);
    witness = c.violation->relation + tuple_labels(src, c.violation->tuple) + " maps to " +
              tuple_labels(dst, image) + ", which is not in " + c.violation->relation;
  }
  return emit(o, bool(c), "homomorphism", witness);
}

int cmd_find_hom(const Options& o) {
  need_files(o, 2, "find-hom SRC DST");
  const Structure src = load_structure(o.files[0]);
  const Structure dst = load_structure(o.files[1]);
  const auto f = find_classical_hom(src, dst);
  if (!f) return emit(o, false, "homomorphism exists", "search exhausted");
  const Json j = map_to_json(*f);
  if (!o.out.empty()) save_json(o.out, j);
  std::cout << j.dump(2) << '\n';
  return kPass;
}

int cmd_verify_qhom(const Options& o) {
  need_files(o, 3, "verify-qhom SRC DST QHOM");
  const Graph g = load_graph(o.files[0]);
  const Graph h = load_graph(o.files[1]);
  const QuantumHomomorphism q = qhom_from_json(load_json(o.files[2]), g, h, o.tol, o.files[2]);
  const GameCheck c = verify_quantum_homomorphism(q);
  return emit(o, bool(c), "quantum homomorphism", c ? "" : game_witness(c), {{"grade", q.grade}});
}

int cmd_derive_strategy(const Options& o) {
  need_files(o, 3, "derive-strategy SRC DST QHOM");
  const Graph g = load_graph(o.files[0]);
  const Graph h = load_graph(o.files[1]);
  const QuantumHomomorphism q = qhom_from_json(load_json(o.files[2]), g, h, o.tol, o.files[2]);
  if (GameCheck c = verify_quantum_homomorphism(q); !c) return emit(o, false, "quantum homomorphism", game_witness(c));
  const Json j = strategy_to_json(strategy_from_qhom(q));
  if (!o.out.empty()) save_json(o.out, j);
  std::cout << j.dump(2) << '\n';
  return kPass;
}

int cmd_verify_strategy(const Options& o) {
  need_files(o, 3, "verify-strategy SRC DST STRATEGY");
  const Graph g = load_graph(o.files[0]);
  const Graph h = load_graph(o.files[1]);
  const PerfectStrategy s = strategy_from_json(load_json(o.files[2]), g, h, o.tol, o.files[2]);
  const GameCheck c = verify_perfect_strategy(s);
  return emit(o, bool(c), "perfect strategy", c ? "" : game_witness(c));
}

int cmd_game(const Options& o) {
  need_files(o, 3, "game SRC DST STRATEGY");
  const Graph g = load_graph(o.files[0]);
  const Graph h = load_graph(o.files[1]);
  const PerfectStrategy s = strategy_from_json(load_json(o.files[2]), g, h, o.tol, o.files[2]);
  const QuestionDistribution qd =
      o.question_dist == "uniform" ? uniform_questions(g.size())
                                   : questions_from_json(load_json(o.question_dist), g.structure(), o.question_dist);
  const GameEvaluation e = evaluate_game(s, qd);
  const bool perfect = std::abs(e.win_probability - 1.0) <= o.tol;
  if (o.json) {
    std::cout << Json{{"win_probability", e.win_probability}, {"perfect", perfect}}.dump(2) << '\n';
  } else {
    std::cout << "win_probability: " << fmt(e.win_probability) << '\n';
  }
  return kPass;
}

template <PartialSemiring S>
void print_value(const std::string& name, const typename S::value_type& v) {
  std::cout << name << ": " << value_to_json(v).dump() << '\n';
}

template <PartialSemiring S>
int run_validity(const S& s, const Options& o, bool conditioning) {
  need_files(o, 3, conditioning ? "condition STRUCTURE STATE PREDICATE" : "validity STRUCTURE STATE PREDICATE");
  const Structure a = load_structure(o.files[0]);
  const State<S> p = state_from_json(s, load_json(o.files[1]), a, o.files[1]);
  const Predicate<S> q = predicate_from_json(s, load_json(o.files[2]), a, o.files[2]);
  if (!conditioning) {
    const auto v = validity(p, q);
    Json j{{"grade", p.grade() * q.grade}, {"validity", value_to_json(v)}};
    if constexpr (!S::kScalar) j["is_projection"] = is_projection(v, o.tol);
    if (o.json) {
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "grade: " << p.grade() * q.grade << '\n';
      print_value<S>("validity", v);
      if constexpr (!S::kScalar) std::cout << "is_projection: " << (is_projection(v, o.tol) ? "yes" : "no") << '\n';
    }
    return kPass;
  }
  const Conditioned<S> c = condition(p, q);
  Json terms = Json::object();
  for (Point x = 0; x < c.terms.size(); ++x) terms[a.label(x)] = value_to_json(c.terms[x]);
  const double residual = conditioning_residual(s, c);
  if (o.json) {
    std::cout << Json{{"grade", c.grade}, {"support", value_to_json(c.support)}, {"terms", terms},
                      {"residual", residual}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "grade: " << c.grade << '\n';
    print_value<S>("support", c.support);
    for (Point x = 0; x < c.terms.size(); ++x) print_value<S>("term " + a.label(x), c.terms[x]);
    std::cout << "residual: " << format_residual(residual) << '\n';
  }
  return residual <= o.tol ? kPass : kFail;
}

template <PartialSemiring S>
int run_compose(const S& s, const Options& o) {
  need_files(o, 5, "compose A B C F E   (F : A -> T(B), E : B -> T(C))");
  const Structure a = load_structure(o.files[0]);
  const Structure b = load_structure(o.files[1]);
  const Structure c = load_structure(o.files[2]);
  const KleisliMap<S> f = kleisli_from_json(s, load_json(o.files[3]), a, b, o.files[3]);
  const KleisliMap<S> e = kleisli_from_json(s, load_json(o.files[4]), b, c, o.files[4]);
  const KleisliMap<S> composite = graded_compose(f, e);
  const QdHomCheck hom = is_qd_kleisli_hom(composite);
  Json j = kleisli_to_json(composite);
  if (o.json) {
    j["homomorphism"] = bool(hom);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
    std::cout << "homomorphism: " << (hom ? "yes" : "no: " + describe(*hom.violation, a, c)) << '\n';
  }
  if (!o.out.empty()) save_json(o.out, kleisli_to_json(composite));
  return kPass;
}

template <class F>
int dispatch(const Options& o, F f) {
  switch (single_instance(o)) {
    case Instance::Boolean:
      return f(BooleanSemiring{});
    case Instance::UnitInterval:
      return f(UnitIntervalSemiring(o.tol));
    case Instance::Projection:
      return f(ProjectionSemiring(o.tol));
  }
  return kInputError;
}

int cmd_laws(const Options& o) {
  LawConfig cfg;
  if (!o.instances.empty()) {
    cfg.instances.clear();
    for (const std::string& name : o.instances) {
      if (name == "all") {
        cfg.instances = {Instance::Boolean, Instance::UnitInterval, Instance::Projection};
        break;
      }
      cfg.instances.push_back(parse_instance(name));
    }
  }
  if (o.grade) cfg.grades = {o.grade};
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.max_size = o.max_size;
  const LawReport r = run_law_suite(cfg);
  if (o.json) {
    std::cout << law_report_to_json(r).dump(2) << '\n';
  } else {
    std::cout << to_text(r);
  }
  return r.failures() == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effectus laws, quantum graph homomorphisms and nonlocal games over finite structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--trials", o.trials, "random trials per instance");
  app.add_option("--question-dist", o.question_dist, "question distribution file, or 'uniform'");
  app.add_option("--instance", o.instances, "bool, prob or proj (laws also accepts 'all' and repeats)")
      ->allow_extra_args(false);
  app.add_option("--grade", o.grade, "projection grade for the effectus squares")->check(CLI::PositiveNumber);
  app.add_option("--max-size", o.max_size, "largest random universe")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--out", o.out, "also write the produced JSON to this file");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"verify-hom", "check a classical homomorphism: SRC DST MAP", cmd_verify_hom},
      {"find-hom", "search for a classical homomorphism: SRC DST", cmd_find_hom},
      {"verify-qhom", "check a quantum homomorphism: SRC DST QHOM", cmd_verify_qhom},
      {"derive-strategy", "perfect strategy from a quantum homomorphism: SRC DST QHOM", cmd_derive_strategy},
      {"verify-strategy", "check a perfect strategy: SRC DST STRATEGY", cmd_verify_strategy},
      {"game", "win probability of a strategy: SRC DST STRATEGY", cmd_game},
      {"validity", "validity of a predicate in a state: STRUCTURE STATE PREDICATE",
       [](const Options& opt) { return dispatch(opt, [&](auto s) { return run_validity(s, opt, false); }); }},
      {"condition", "condition a state on a predicate: STRUCTURE STATE PREDICATE",
       [](const Options& opt) { return dispatch(opt, [&](auto s) { return run_validity(s, opt, true); }); }},
      {"compose", "compose Kleisli maps: A B C F E", [](const Options& opt) {
         return dispatch(opt, [&](auto s) { return run_compose(s, opt); });
       }},
      {"laws", "run the effectus and graded-monad law suite", cmd_laws},
  };
  const Command* chosen = nullptr;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("files", o.files, "input files");
    sub->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  try {
    return chosen->run(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
