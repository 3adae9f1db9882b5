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

#include "kanlut/reference.h"

#include <fmt/format.h>

#include "kanlut/error.h"

namespace kanlut {

QuantizedReference::QuantizedReference(const KanModel& model,
                                       const QuantPlan& plan)
    : model_(model), plan_(plan) {
  auto v = validate_plan(plan, model);
  if (!v.empty()) throw ValidationError(std::move(v));
  const int last = static_cast<int>(plan.layers.size()) - 1;
  output_offsets_.assign(plan.n_out(last), 0.0);
  for (int j = 0; j < plan.n_out(last); ++j) {
    for (int i = 0; i < plan.n_in(last); ++i) {
      output_offsets_[j] += plan.edge(last, i, j).phi_min;
    }
  }
}

std::vector<double> QuantizedReference::infer(
    std::span<const double> x, std::vector<LayerStages>* stages) const {
  if (static_cast<int>(x.size()) != model_.num_inputs()) {
    throw StructuralError(fmt::format("input has {} values, model expects {}",
                                      x.size(), model_.num_inputs()));
  }
  if (stages) stages->assign(model_.layers.size(), LayerStages{});
  std::vector<std::int64_t> prev_accum;
  for (std::size_t l = 0; l < model_.layers.size(); ++l) {
    const KanLayer& layer = model_.layers[l];
    const LayerQuant& lq = plan_.layers[l];
    std::vector<std::int64_t> accum(layer.n_out, 0);
    LayerStages local;
    LayerStages& st = stages ? (*stages)[l] : local;
    st.quant.resize(layer.edges.size());
    st.lookup.resize(layer.edges.size());
    for (int i = 0; i < layer.n_in; ++i) {
      for (int j = 0; j < layer.n_out; ++j) {
        const EdgeQuant& q = plan_.edge(static_cast<int>(l), i, j);
        const Code in =
            l == 0 ? uniform_quantize(x[i], lq.grid_min, q.s_in_edge, q.b_in)
                   : requantize(prev_accum[i], q.alpha, q.bias, q.b_in);
        const Code out =
            table_entry(layer.edge(i, j), layer.grid, q, lq.s_out[j], in);
        st.quant[i * layer.n_out + j] = in;
        st.lookup[i * layer.n_out + j] = out;
        accum[j] += out;
      }
    }
    st.accum = accum;
    prev_accum = std::move(accum);
  }
  const LayerQuant& last = plan_.layers.back();
  std::vector<double> y(prev_accum.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    y[j] = last.s_out[j] * static_cast<double>(prev_accum[j]) +
           output_offsets_[j];
  }
  return y;
}

Matrix QuantizedReference::infer_batch(const Matrix& inputs) const {
  Matrix out;
  out.rows = inputs.rows;
  out.cols = model_.num_outputs();
  out.data.reserve(out.rows * out.cols);
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    auto y = infer({inputs.row(r), inputs.cols});
    out.data.insert(out.data.end(), y.begin(), y.end());
  }
  return out;
}

}  // namespace kanlut
