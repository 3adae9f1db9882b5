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

#ifndef KANLUT_TABULATE_H_
#define KANLUT_TABULATE_H_

#include <cstdint>
#include <vector>

#include "kanlut/fixed_point.h"
#include "kanlut/model.h"
#include "kanlut/plan.h"

namespace kanlut {

// Contents of one edge's LUT pool. The input code is the address.
struct EdgeTable {
  int layer = 0;
  int source = 0;
  int target = 0;
  int b_in = 0;
  int b_out = 0;
  std::vector<Code> codes;  // 2^b_in entries
  std::int64_t delta = 0;
  bool operator==(const EdgeTable&) const = default;
};

EdgeTable tabulate_edge(const Edge& edge, const Grid& grid,
                        const LayerQuant& layer_quant,
                        const EdgeQuant& edge_quant);

// Every edge of the model, in plan order (edges[l][i * n_out + j]).
std::vector<std::vector<EdgeTable>> tabulate_model(const KanModel& model,
                                                   const QuantPlan& plan);

}  // namespace kanlut

#endif  // KANLUT_TABULATE_H_
