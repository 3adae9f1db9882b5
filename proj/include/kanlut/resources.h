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

#ifndef KANLUT_RESOURCES_H_
#define KANLUT_RESOURCES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kanlut/lut_count.h"
#include "kanlut/model.h"
#include "kanlut/plan.h"

namespace kanlut {

struct EdgeBits {
  int layer = 0;
  int source = 0;
  int target = 0;
  int b_in = 0;
  int b_out = 0;
};

struct EdgeResources {
  EdgeBits bits;
  std::vector<LutCount> theoretical;  // one per requested N
  std::uint64_t physical_blocks = 0;
};

// One row of the resource table.
struct VariantReport {
  std::string name;
  bool fine_inputs = false;
  bool fine_outputs = false;
  std::vector<EdgeResources> edges;
  std::vector<std::vector<LutCount>> layer_theoretical;  // [layer][N]
  std::vector<std::uint64_t> layer_physical;
  std::vector<LutCount> total_theoretical;  // [N]
  std::uint64_t total_physical = 0;
  int out_bits_max = 0;
  double out_bits_mean = 0.0;
  int in_bits_max = 0;
  double in_bits_mean = 0.0;
  // Versus the baseline row, floored to hundredths of a percent, per N.
  std::vector<std::int64_t> savings_bp;
  std::int64_t physical_savings_bp = 0;
};

struct ResourceReport {
  std::vector<int> lut_inputs;  // the N values
  std::vector<VariantReport> variants;  // variants[0] is the baseline
};

// Builds a row from explicit per-edge widths, with savings against
// `baseline` (or zero savings when null). The flags mark which widths are
// per edge; the table shows means only for those.
VariantReport make_variant(std::string name, std::vector<EdgeBits> edges,
                           std::span<const int> lut_inputs,
                           const VariantReport* baseline, bool fine_inputs,
                           bool fine_outputs);

// Global, fine-grained-output and fine-grained-both rows for `plan`. The
// output row re-derives per-edge output widths at each layer's global input
// width; the last row is the plan's own per-edge widths.
ResourceReport estimate_model(const KanModel& model, const QuantPlan& plan,
                              std::span<const int> lut_inputs);

// Aligned text table: output bits, input bits, LUT counts, savings.
std::string render_resource_table(const ResourceReport& report,
                                  const std::string& task);
std::string resource_report_json(const ResourceReport& report);

}  // namespace kanlut

#endif  // KANLUT_RESOURCES_H_
