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

#ifndef KANLUT_REFERENCE_H_
#define KANLUT_REFERENCE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "kanlut/dataset.h"
#include "kanlut/model.h"
#include "kanlut/plan.h"

namespace kanlut {

// Integer values of one layer at each pipeline stage.
struct LayerStages {
  std::vector<Code> quant;           // per edge, i * n_out + j
  std::vector<Code> lookup;          // per edge
  std::vector<std::int64_t> accum;   // per target neuron
  bool operator==(const LayerStages&) const = default;
};

// Software evaluation of a quantization plan: per-edge input quantization,
// on-demand tabulation and integer accumulation, straight from the model and
// plan. It is the ground truth the simulator is checked against and the
// evaluator the calibration search runs.
class QuantizedReference {
 public:
  // Both arguments must outlive the reference.
  QuantizedReference(const KanModel& model, const QuantPlan& plan);

  std::vector<double> infer(std::span<const double> x,
                            std::vector<LayerStages>* stages = nullptr) const;
  Matrix infer_batch(const Matrix& inputs) const;

 private:
  const KanModel& model_;
  const QuantPlan& plan_;
  std::vector<double> output_offsets_;  // sum of phi_min per output neuron
};

}  // namespace kanlut

#endif  // KANLUT_REFERENCE_H_
