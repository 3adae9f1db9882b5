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

#include "kanlut/bspline.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "kanlut/error.h"

namespace kanlut {
namespace {

// Index m with knot(m) <= x < knot(m + 1), or -1 outside the knot vector.
int find_span(const Grid& grid, double x) {
  const int last_cell = grid.num_knots() - 2;
  if (x == grid.grid_max) return grid.order + grid.intervals - 1;
  if (x < grid.knot(0) || x >= grid.knot(last_cell + 1)) return -1;
  int m = static_cast<int>(std::floor((x - grid.knot(0)) / grid.spacing()));
  m = std::clamp(m, 0, last_cell);
  while (m > 0 && x < grid.knot(m)) --m;
  while (m < last_cell && x >= grid.knot(m + 1)) ++m;
  return m;
}

}  // namespace

double Grid::knot(int m) const {
  if (m == order) return grid_min;
  if (m == order + intervals) return grid_max;
  return grid_min + (grid_max - grid_min) * static_cast<double>(m - order) /
                        static_cast<double>(intervals);
}

double Grid::clamp(double x) const { return std::clamp(x, grid_min, grid_max); }

double bspline_basis(const Grid& grid, int index, double x) {
  if (index < 0 || index >= grid.num_basis()) {
    throw StructuralError(fmt::format("basis index {} outside [0, {})", index,
                                      grid.num_basis()));
  }
  const int k = grid.order;
  const int span = find_span(grid, x);
  if (span < index || span > index + k) return 0.0;

  // n[r] holds N_{index + r, p} while p climbs from 0 to k.
  std::vector<double> n(k + 1, 0.0);
  n[span - index] = 1.0;
  for (int p = 1; p <= k; ++p) {
    for (int r = 0; r + p <= k; ++r) {
      const int m = index + r;
      double value = 0.0;
      const double left_den = grid.knot(m + p) - grid.knot(m);
      if (left_den != 0.0) value += (x - grid.knot(m)) / left_den * n[r];
      const double right_den = grid.knot(m + p + 1) - grid.knot(m + 1);
      if (right_den != 0.0) {
        value += (grid.knot(m + p + 1) - x) / right_den * n[r + 1];
      }
      n[r] = value;
    }
  }
  return n[0];
}

int nonzero_basis(const Grid& grid, double x, std::span<double> out) {
  const int k = grid.order;
  KANLUT_CHECK(static_cast<int>(out.size()) >= k + 1, "basis buffer too small");
  KANLUT_CHECK(x >= grid.grid_min && x <= grid.grid_max,
               "nonzero_basis needs x inside the grid");
  const int span = std::clamp(find_span(grid, x), k, k + grid.intervals - 1);

  // Triangular scheme over the k+1 bases with support on cell `span`.
  double left[32];
  double right[32];
  KANLUT_CHECK(k < 32, "spline order too large");
  out[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    left[j] = x - grid.knot(span + 1 - j);
    right[j] = grid.knot(span + j) - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
  return span - k;
}

}  // namespace kanlut
