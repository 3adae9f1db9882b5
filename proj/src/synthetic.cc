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

#include "kanlut/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kanlut/error.h"

namespace kanlut {

double SplitRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int SplitRng::uniform_int(int lo, int hi) {
  KANLUT_CHECK(lo <= hi, "empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double SplitRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u == 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * std::numbers::pi * v);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * v);
}

KanModel random_model(const std::vector<int>& shape, std::uint64_t seed,
                      const SyntheticModelOptions& options) {
  if (shape.size() < 2) throw StructuralError("shape needs two widths");
  SplitRng rng(seed);
  KanModel model;
  double lo = options.input_min;
  double hi = options.input_max;
  for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
    KanLayer layer;
    layer.n_in = shape[l];
    layer.n_out = shape[l + 1];
    layer.grid = Grid{lo, hi, options.intervals, options.order};
    for (int i = 0; i < layer.n_in; ++i) {
      for (int j = 0; j < layer.n_out; ++j) {
        Edge e;
        e.source = i;
        e.target = j;
        e.w_b = rng.uniform(-options.w_b_scale, options.w_b_scale);
        e.w_s = rng.uniform(0.5, 1.5);
        e.coeffs.resize(layer.grid.num_basis());
        for (double& c : e.coeffs) {
          c = rng.uniform(-options.coeff_scale, options.coeff_scale);
        }
        layer.edges.push_back(std::move(e));
      }
    }
    if (options.fit_grids) {
      // Interval bound on each output neuron from dense samples of each
      // incoming edge, then the widest neuron sets the next grid.
      constexpr int kSamples = 1025;
      double next_lo = 0.0, next_hi = 0.0;
      for (int j = 0; j < layer.n_out; ++j) {
        double sum_lo = 0.0, sum_hi = 0.0;
        for (int i = 0; i < layer.n_in; ++i) {
          double mn = INFINITY, mx = -INFINITY;
          for (int s = 0; s < kSamples; ++s) {
            const double x = lo + (hi - lo) * s / (kSamples - 1);
            const double y = phi_eval(layer.edge(i, j), layer.grid, x);
            mn = std::min(mn, y);
            mx = std::max(mx, y);
          }
          sum_lo += mn;
          sum_hi += mx;
        }
        if (j == 0 || sum_lo < next_lo) next_lo = sum_lo;
        if (j == 0 || sum_hi > next_hi) next_hi = sum_hi;
      }
      if (!(next_hi > next_lo)) next_hi = next_lo + 1.0;
      lo = next_lo;
      hi = next_hi;
    }
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Dataset synthetic_regression(const KanModel& model, std::size_t rows,
                             double noise_sigma, std::uint64_t seed) {
  SplitRng rng(seed);
  const Grid& g = model.layers.front().grid;
  Dataset d;
  d.kind = MetricKind::kRegression;
  d.inputs.rows = d.targets.rows = rows;
  d.inputs.cols = static_cast<std::size_t>(model.num_inputs());
  d.targets.cols = static_cast<std::size_t>(model.num_outputs());
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> x(d.inputs.cols);
    for (double& v : x) v = rng.uniform(g.grid_min, g.grid_max);
    const auto y = forward_float(model, x);
    d.inputs.data.insert(d.inputs.data.end(), x.begin(), x.end());
    for (double v : y) d.targets.data.push_back(v + noise_sigma * rng.normal());
  }
  return d;
}

}  // namespace kanlut
