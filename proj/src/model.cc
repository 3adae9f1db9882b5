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

#include "kanlut/model.h"

#include <cmath>

#include <fmt/format.h>

#include "kanlut/error.h"

namespace kanlut {

std::size_t KanModel::num_edges() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.edges.size();
  return n;
}

std::vector<int> KanModel::shape() const {
  std::vector<int> s;
  if (layers.empty()) return s;
  s.push_back(layers.front().n_in);
  for (const auto& layer : layers) s.push_back(layer.n_out);
  return s;
}

double silu(double x) { return x / (1.0 + std::exp(-x)); }

double spline_eval(const Edge& edge, const Grid& grid, double x) {
  const int k = grid.order;
  if (x >= grid.grid_min && x <= grid.grid_max) {
    double basis[32];
    const int first = nonzero_basis(grid, x, std::span<double>(basis, k + 1));
    double sum = 0.0;
    for (int r = 0; r <= k; ++r) sum += edge.coeffs[first + r] * basis[r];
    return sum;
  }
  double sum = 0.0;
  for (int i = 0; i < grid.num_basis(); ++i) {
    sum += edge.coeffs[i] * bspline_basis(grid, i, x);
  }
  return sum;
}

double phi_eval(const Edge& edge, const Grid& grid, double x) {
  const double xc = grid.clamp(x);
  return edge.w_b * silu(xc) + edge.w_s * spline_eval(edge, grid, xc);
}

std::vector<double> forward_float(const KanModel& model,
                                  std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.num_inputs()) {
    throw StructuralError(fmt::format("input has {} values, model expects {}",
                                      x.size(), model.num_inputs()));
  }
  std::vector<double> current(x.begin(), x.end());
  for (const auto& layer : model.layers) {
    std::vector<double> next(layer.n_out, 0.0);
    for (int j = 0; j < layer.n_out; ++j) {
      for (int i = 0; i < layer.n_in; ++i) {
        next[j] += phi_eval(layer.edge(i, j), layer.grid, current[i]);
      }
    }
    current = std::move(next);
  }
  return current;
}

std::vector<std::string> validate_model(const KanModel& model) {
  std::vector<std::string> v;
  if (model.layers.empty()) v.push_back("model has no layers");
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const KanLayer& layer = model.layers[l];
    const Grid& g = layer.grid;
    if (layer.n_in < 1 || layer.n_out < 1) {
      v.push_back(fmt::format("layer {}: n_in and n_out must be positive", l));
      continue;
    }
    if (!std::isfinite(g.grid_min) || !std::isfinite(g.grid_max) ||
        !(g.grid_min < g.grid_max)) {
      v.push_back(fmt::format("layer {}: need finite grid_min < grid_max", l));
    }
    if (g.intervals < 1) {
      v.push_back(fmt::format("layer {}: grid_size must be >= 1", l));
    }
    if (g.order < 0 || g.order > 16) {
      v.push_back(fmt::format("layer {}: spline_order must be in [0, 16]", l));
    }
    if (l + 1 < model.layers.size() &&
        layer.n_out != model.layers[l + 1].n_in) {
      v.push_back(fmt::format("layer {}: n_out {} != layer {} n_in {}", l,
                              layer.n_out, l + 1, model.layers[l + 1].n_in));
    }
    const std::size_t expected =
        static_cast<std::size_t>(layer.n_in) * layer.n_out;
    if (layer.edges.size() != expected) {
      v.push_back(fmt::format("layer {}: {} edges, expected {}", l,
                              layer.edges.size(), expected));
      continue;
    }
    for (int i = 0; i < layer.n_in; ++i) {
      for (int j = 0; j < layer.n_out; ++j) {
        const Edge& e = layer.edge(i, j);
        if (e.source != i || e.target != j) {
          v.push_back(fmt::format("layer {} edge ({}, {}): stored as ({}, {})",
                                  l, i, j, e.source, e.target));
        }
        if (static_cast<int>(e.coeffs.size()) != g.num_basis()) {
          v.push_back(fmt::format(
              "layer {} edge ({}, {}): {} coeffs, expected G+k = {}", l, i, j,
              e.coeffs.size(), g.num_basis()));
        }
        bool finite = std::isfinite(e.w_b) && std::isfinite(e.w_s);
        for (double c : e.coeffs) finite = finite && std::isfinite(c);
        if (!finite) {
          v.push_back(fmt::format("layer {} edge ({}, {}): non-finite value",
                                  l, i, j));
        }
      }
    }
  }
  return v;
}

}  // namespace kanlut
