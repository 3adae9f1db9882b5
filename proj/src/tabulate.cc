// Copyright 2026 The kanlut Authors.
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

#include "kanlut/tabulate.h"

#include <fmt/format.h>

#include "kanlut/error.h"

namespace kanlut {

EdgeTable tabulate_edge(const Edge& edge, const Grid& grid,
                        const LayerQuant& layer_quant,
                        const EdgeQuant& edge_quant) {
  KANLUT_CHECK(edge_quant.b_in >= 1 && edge_quant.b_in <= kMaxInputBits,
               "edge input width outside [1, 24]");
  EdgeTable t;
  t.layer = edge_quant.layer;
  t.source = edge_quant.source;
  t.target = edge_quant.target;
  t.b_in = edge_quant.b_in;
  t.b_out = edge_quant.b_out;
  t.delta = edge_quant.delta;
  const double s_out = layer_quant.s_out.at(edge_quant.target);
  const std::uint64_t n = max_code(t.b_in) + 1;
  t.codes.resize(n);
  for (std::uint64_t c = 0; c < n; ++c) {
    t.codes[c] = table_entry(edge, grid, edge_quant, s_out,
                             static_cast<Code>(c));
  }
  return t;
}

std::vector<std::vector<EdgeTable>> tabulate_model(const KanModel& model,
                                                   const QuantPlan& plan) {
  auto v = validate_plan(plan, model);
  if (!v.empty()) throw ValidationError(std::move(v));
  std::vector<std::vector<EdgeTable>> out(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const KanLayer& layer = model.layers[l];
    out[l].reserve(layer.edges.size());
    for (int i = 0; i < layer.n_in; ++i) {
      for (int j = 0; j < layer.n_out; ++j) {
        out[l].push_back(tabulate_edge(layer.edge(i, j), layer.grid,
                                       plan.layers[l],
                                       plan.edge(static_cast<int>(l), i, j)));
      }
    }
  }
  return out;
}

}  // namespace kanlut
