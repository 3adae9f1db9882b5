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

#ifndef KANLUT_MODEL_H_
#define KANLUT_MODEL_H_

#include <span>
#include <string>
#include <vector>

#include "kanlut/bspline.h"

namespace kanlut {

// phi(x) = w_b * silu(x) + w_s * sum_i coeffs[i] * B_i(x)
struct Edge {
  int source = 0;  // i
  int target = 0;  // j
  double w_b = 0.0;
  double w_s = 0.0;
  std::vector<double> coeffs;
  bool operator==(const Edge&) const = default;
};

// Dense n_in x n_out layer; edge (i, j) lives at edges[i * n_out + j].
struct KanLayer {
  int n_in = 0;
  int n_out = 0;
  Grid grid;
  std::vector<Edge> edges;

  const Edge& edge(int i, int j) const { return edges[i * n_out + j]; }
  Edge& edge(int i, int j) { return edges[i * n_out + j]; }
  bool operator==(const KanLayer&) const = default;
};

struct KanModel {
  std::vector<KanLayer> layers;

  int num_inputs() const { return layers.empty() ? 0 : layers.front().n_in; }
  int num_outputs() const { return layers.empty() ? 0 : layers.back().n_out; }
  std::size_t num_edges() const;
  std::vector<int> shape() const;
  bool operator==(const KanModel&) const = default;
};

double silu(double x);
double spline_eval(const Edge& edge, const Grid& grid, double x);
// Clamps x into the grid before both branches.
double phi_eval(const Edge& edge, const Grid& grid, double x);

std::vector<double> forward_float(const KanModel& model,
                                  std::span<const double> x);

// Empty iff every structural invariant holds.
std::vector<std::string> validate_model(const KanModel& model);

}  // namespace kanlut

#endif  // KANLUT_MODEL_H_
