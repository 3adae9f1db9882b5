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

#ifndef KANLUT_BSPLINE_H_
#define KANLUT_BSPLINE_H_

#include <span>

namespace kanlut {

// Uniform knot grid over [grid_min, grid_max] with `intervals` cells, extended
// by `order` knots on each side. Knot m sits at grid_min + (m - order) * h.
struct Grid {
  double grid_min = -1.0;
  double grid_max = 1.0;
  int intervals = 1;  // G
  int order = 0;      // k

  int num_basis() const { return intervals + order; }
  int num_knots() const { return intervals + 2 * order + 1; }
  double spacing() const { return (grid_max - grid_min) / intervals; }
  double knot(int m) const;
  double clamp(double x) const;
  bool operator==(const Grid&) const = default;
};

// Degree-`order` basis function `index` at x (Cox-de Boor, 0/0 := 0). Zero
// outside [knot(index), knot(index + order + 1)]. The last internal cell is
// closed on the right so the bases sum to one on all of [grid_min, grid_max].
double bspline_basis(const Grid& grid, int index, double x);

// For x in [grid_min, grid_max], writes the order+1 possibly non-zero basis
// values into `out` and returns the index of the first one.
int nonzero_basis(const Grid& grid, double x, std::span<double> out);

}  // namespace kanlut

#endif  // KANLUT_BSPLINE_H_
