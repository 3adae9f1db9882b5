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

#ifndef KANLUT_EVAL_H_
#define KANLUT_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "kanlut/accelerator.h"
#include "kanlut/dataset.h"
#include "kanlut/model.h"
#include "kanlut/plan.h"

namespace kanlut {

// One model of a possibly multi-model task; its outputs fill consecutive
// target columns. All three must outlive the call.
struct EvalComponent {
  const KanModel* model = nullptr;
  const QuantPlan* plan = nullptr;
  const CompiledAccelerator* accelerator = nullptr;
};

struct PathMetrics {
  double rmse = 0.0;           // regression
  double relative_rmse = 0.0;  // rmse / rms(targets)
  double accuracy = 0.0;       // classification
  std::vector<double> column_rmse;
};

struct EvalReport {
  MetricKind kind = MetricKind::kRegression;
  std::size_t samples = 0;
  int components = 0;
  PathMetrics float_path;
  PathMetrics quantized;
  PathMetrics simulated;
  // Quantized path against the float path.
  double degradation = 0.0;
  double rmse_vs_float = 0.0;
  std::vector<std::uint64_t> cycles;  // per component
  std::string input_scaling;
  double runtime_seconds = 0.0;  // wall clock; text report only
};

// Runs float, quantized-reference and simulator paths over every row.
// Throws MismatchError at the first stage where reference and simulator
// integers differ.
EvalReport compare(const std::vector<EvalComponent>& components,
                   const Dataset& data, std::string input_scaling = "none");
EvalReport compare(const KanModel& model, const QuantPlan& plan,
                   const CompiledAccelerator& acc, const Dataset& data);

std::string render_eval(const EvalReport& report);
// Deterministic: runtime is left out.
std::string eval_report_json(const EvalReport& report);

}  // namespace kanlut

#endif  // KANLUT_EVAL_H_
