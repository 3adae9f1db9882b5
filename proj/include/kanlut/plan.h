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

#ifndef KANLUT_PLAN_H_
#define KANLUT_PLAN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kanlut/dataset.h"
#include "kanlut/fixed_point.h"
#include "kanlut/model.h"

namespace kanlut {

struct LayerQuant {
  int b_in_global = 0;
  int b_out_global = 0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  double s_in = 0.0;
  std::vector<double> s_out;  // one shared output step per target neuron
  bool operator==(const LayerQuant&) const = default;
};

struct EdgeQuant {
  int layer = 0;
  int source = 0;
  int target = 0;
  int b_in = 0;
  int b_out = 0;
  double s_in_edge = 0.0;
  // Extremes of phi over the edge's input lattice at b_in.
  double phi_min = 0.0;
  double phi_max = 0.0;
  std::int64_t delta = 0;  // round(phi_min / s_out[target])
  // Quant block in front of this edge (layers >= 1): converts the source
  // neuron's accumulated code into this edge's b_in-bit input code.
  FixedPointScale alpha;
  std::int64_t bias = 0;
  bool operator==(const EdgeQuant&) const = default;
};

struct PlanMetadata {
  MetricKind metric = MetricKind::kRegression;
  double threshold = 0.0;
  double metric_value = 0.0;
  std::string calibration_digest;
  std::string stage = "global";
  std::uint64_t seed = 0;
  bool operator==(const PlanMetadata&) const = default;
};

inline constexpr char kLatticeRule[] = "edge-input-lattice-at-current-b_in";

struct QuantPlan {
  std::vector<LayerQuant> layers;
  // edges[l][i * n_out + j], same layout as KanLayer::edges.
  std::vector<std::vector<EdgeQuant>> edges;
  int n_sig = 24;
  PlanMetadata meta;

  int n_out(int layer) const {
    return static_cast<int>(layers[layer].s_out.size());
  }
  int n_in(int layer) const {
    return static_cast<int>(edges[layer].size()) / n_out(layer);
  }
  const EdgeQuant& edge(int l, int i, int j) const {
    return edges[l][i * n_out(l) + j];
  }
  EdgeQuant& edge(int l, int i, int j) { return edges[l][i * n_out(l) + j]; }
  std::size_t num_edges() const;
  bool operator==(const QuantPlan&) const = default;
};

// Step placing 2^bits levels so both range endpoints are representable.
double step_for_bits(double range, int bits);
// Input value addressed by code c on the bits-bit lattice of `grid`.
double lattice_point(const Grid& grid, int bits, Code c);

// Stored LUT code for input code c. The one tabulation formula shared by the
// compiler and the quantized reference.
Code table_entry(const Edge& edge, const Grid& grid, const EdgeQuant& q,
                 double s_out, Code c);

// Recomputes every edge's alpha and bias from the current steps, offsets and
// plan.n_sig. First-layer edges get the identity scale and zero bias.
void refresh_conversions(QuantPlan& plan);

// Empty iff `plan` covers `model` edge-for-edge with consistent fields.
std::vector<std::string> validate_plan(const QuantPlan& plan,
                                       const KanModel& model);
std::vector<std::string> validate_plan(const QuantPlan& plan);

std::string serialize_plan(const QuantPlan& plan);
QuantPlan parse_plan(const std::string& text);
void save_plan(const QuantPlan& plan, const std::filesystem::path& path);
QuantPlan load_plan(const std::filesystem::path& path);

}  // namespace kanlut

#endif  // KANLUT_PLAN_H_
