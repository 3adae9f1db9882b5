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

#ifndef KANLUT_SIMULATOR_H_
#define KANLUT_SIMULATOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kanlut/accelerator.h"
#include "kanlut/dataset.h"
#include "kanlut/reference.h"

namespace kanlut {

// clamp(round_half_up(((code_in + bias) * m) / 2^f), 0, 2^clamp_bits - 1)
// in integer arithmetic. When the register widths are given (> 0), the
// biased sum and the product must fit them.
Code quant_block(std::int64_t code_in, const FixedPointScale& scale,
                 std::int64_t bias, int clamp_bits, int biased_bits = 0,
                 int product_bits = 0);

Code lut_lookup(const EdgeTable& table, Code code);

// Plain sum; the result must fit an unsigned register of width_bits.
std::int64_t accumulate(std::span<const Code> codes, int width_bits);

struct SimTrace {
  std::vector<LayerStages> layers;
  std::uint64_t cycles = 0;
  bool operator==(const SimTrace&) const = default;
};

struct SimResult {
  std::vector<double> outputs;
  SimTrace trace;
};

// Stateless between inputs: every stage reads only the current input's
// values, so one input can enter the pipeline per cycle.
SimResult run_model(const CompiledAccelerator& acc, std::span<const double> x);

// Rows of `inputs` through run_model; traces are kept only when requested.
Matrix run_batch(const CompiledAccelerator& acc, const Matrix& inputs,
                 std::vector<SimTrace>* traces = nullptr);

// Estimated pipeline latency: per layer, two cycles of quant block, one of
// lookup and a ceil(log2(fan_in))-deep adder tree.
std::uint64_t cycle_count(const CompiledAccelerator& acc);
double latency_at(const CompiledAccelerator& acc, double clock_hz);

// One line per value: "<row> <stage> <layer> <index> <value>".
std::string format_trace(const SimTrace& trace, long row);

}  // namespace kanlut

#endif  // KANLUT_SIMULATOR_H_
