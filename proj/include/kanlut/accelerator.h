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

#ifndef KANLUT_ACCELERATOR_H_
#define KANLUT_ACCELERATOR_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kanlut/fixed_point.h"
#include "kanlut/model.h"
#include "kanlut/plan.h"
#include "kanlut/tabulate.h"

namespace kanlut {

inline constexpr int kBundleFormatVersion = 1;

struct CompiledEdge {
  EdgeTable table;
  // First layer: direct input quantization on the edge's lattice.
  double grid_min = 0.0;
  double s_in_edge = 0.0;
  // Later layers: quant block constants.
  FixedPointScale scale;
  std::int64_t bias = 0;
  // Signed widths of (accum + bias) and of (accum + bias) * mantissa.
  int biased_bits = 0;
  int product_bits = 0;
  bool operator==(const CompiledEdge&) const = default;
};

struct CompiledLayer {
  int n_in = 0;
  int n_out = 0;
  std::vector<CompiledEdge> edges;  // i * n_out + j
  // Unsigned accumulator width per target neuron: holds the sum of its
  // incoming tables' largest codes.
  std::vector<int> accum_bits;
  std::vector<double> s_out;
  bool operator==(const CompiledLayer&) const = default;
};

struct CompiledAccelerator {
  std::vector<CompiledLayer> layers;
  // Real value of output j is s_out[j] * accum[j] + output_offsets[j].
  std::vector<double> output_offsets;
  int n_sig = 0;

  int num_inputs() const { return layers.front().n_in; }
  int num_outputs() const { return layers.back().n_out; }
  bool operator==(const CompiledAccelerator&) const = default;
};

// Tabulates every edge and fixes every register width.
CompiledAccelerator compile_accelerator(const KanModel& model,
                                        const QuantPlan& plan);

// Writes one .mem file per edge plus manifest.json; returns the manifest
// text. Throws IoError when the directory is unwritable.
std::string emit_init_files(const CompiledAccelerator& acc,
                            const std::filesystem::path& out_dir);
CompiledAccelerator load_bundle(const std::filesystem::path& dir);

}  // namespace kanlut

#endif  // KANLUT_ACCELERATOR_H_
