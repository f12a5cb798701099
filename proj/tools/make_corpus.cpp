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

// Writes the bundled example files into a directory.

#include <iostream>
#include <string>

#include "qeff/io.hpp"
#include "qeff/quantum_games.hpp"
#include "qeff/rstruct.hpp"
#include "qeff/state_logic.hpp"

int main(int argc, char** argv) {
  using namespace qeff;
  if (argc != 2) {
    std::cerr << "usage: make_corpus DIR\n";
    return 2;
  }
  const std::string dir = argv[1];
  auto put = [&](const std::string& name, const Json& j) { save_json(dir + "/" + name, j); };

  for (std::size_t n = 1; n <= 7; ++n) put("k" + std::to_string(n) + ".json", graph_to_json(complete_graph(n)));
  for (std::size_t n = 3; n <= 7; ++n) put("c" + std::to_string(n) + ".json", graph_to_json(cycle_graph(n)));

  const Graph c5 = cycle_graph(5), k3 = complete_graph(3), k2 = complete_graph(2), k1 = complete_graph(1);
  const Function f = *find_homomorphism(c5.structure(), k3.structure());
  Function shifted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) shifted[i] = (f[i] + 1) % 3;

  put("c5_k3_map.json", map_to_json(StructureMap::make(c5.structure(), k3.structure(), f)));
  const QuantumHomomorphism q1 = qhom_from_classical(c5, k3, f, 1);
  const QuantumHomomorphism q2 = qhom_block_diagonal(c5, k3, {f, shifted});
  put("c5_k3_qhom_d1.json", qhom_to_json(q1));
  put("c5_k3_qhom_d2.json", qhom_to_json(q2));
  put("c5_k3_strategy_d1.json", strategy_to_json(strategy_from_qhom(q1)));
  put("c5_k3_strategy_d2.json", strategy_to_json(strategy_from_qhom(q2)));
  put("k2_k1_strategy.json", strategy_to_json(deterministic_strategy(k2, k1, {0, 0}, {0, 0})));
  put("k3_identity_map.json", map_to_json(identity_map(k3.structure())));
  put("k2_constant_map.json", map_to_json(StructureMap::make(k2.structure(), k2.structure(), {0, 0})));
  put("k2_questions_diagonal.json", questions_to_json({2, {0.5, 0.0, 0.0, 0.5}}, k2.structure()));

  // Two-point structure with a single binary relation relating a and b.
  const Structure ab = Structure::from_labels({"a", "b"}, {{"R", {2, {{"a", "b"}}}}});
  put("ab.json", structure_to_json(ab));
  const UnitIntervalSemiring prob(kDefaultTol);
  put("ab_state_prob.json", state_to_json(make_state(ab, Distribution<UnitIntervalSemiring>::make(prob, 2, 1, {{0, 0.5}, {1, 0.5}}))));
  put("ab_pred_prob.json", predicate_to_json(make_predicate(prob, ab, 1, {1.0, 0.5})));
  const ProjectionSemiring proj(kDefaultTol);
  const Matrix e0 = Matrix::diagonal({1.0, 0.0}), e1 = Matrix::diagonal({0.0, 1.0});
  put("ab_state_proj.json",
      state_to_json(make_state(ab, Distribution<ProjectionSemiring>::make(proj, 2, 2, {{0, e0}, {1, e1}}))));
  put("ab_pred_proj.json", predicate_to_json(make_predicate(proj, ab, 2, {e0, Matrix::zero(2)})));
  put("ab_pred_proj_truth.json", predicate_to_json(truth(proj, ab, 2)));
  return 0;
}
