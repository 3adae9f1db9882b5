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

#ifndef KANLUT_TESTS_TEST_SUPPORT_H_
#define KANLUT_TESTS_TEST_SUPPORT_H_

// Independent oracles and generators shared by the unit tests. Nothing here
// calls into the code under test except for data-structure accessors.

#include <cmath>
#include <cstdint>
#include <vector>

#include "kanlut/model.h"
#include "kanlut/synthetic.h"

namespace kanlut::testing {

// Textbook recursive Cox-de Boor on explicit knots, with the right end of
// the last internal cell closed.
inline double naive_basis(const std::vector<double>& t, int i, int k, double x,
                          int last_cell) {
  if (k == 0) {
    // grid_max belongs to the last internal cell only.
    if (x == t[last_cell + 1]) return i == last_cell ? 1.0 : 0.0;
    return t[i] <= x && x < t[i + 1] ? 1.0 : 0.0;
  }
  double a = 0.0, b = 0.0;
  const double d1 = t[i + k] - t[i];
  const double d2 = t[i + k + 1] - t[i + 1];
  if (d1 != 0.0) a = (x - t[i]) / d1 * naive_basis(t, i, k - 1, x, last_cell);
  if (d2 != 0.0) {
    b = (t[i + k + 1] - x) / d2 * naive_basis(t, i + 1, k - 1, x, last_cell);
  }
  return a + b;
}

inline std::vector<double> naive_knots(double lo, double hi, int g, int k) {
  std::vector<double> t;
  for (int m = 0; m <= g + 2 * k; ++m) {
    t.push_back(m == k + g ? hi : lo + (hi - lo) * (m - k) / g);
  }
  return t;
}

// phi evaluated term by term: clamp, long-double SiLU, naive bases.
inline double naive_phi(const Edge& e, const Grid& g, double x) {
  const double xc = std::min(std::max(x, g.grid_min), g.grid_max);
  const auto t = naive_knots(g.grid_min, g.grid_max, g.intervals, g.order);
  const long double xl = xc;
  const long double silu = xl / (1.0L + std::exp(-xl));
  long double spline = 0.0L;
  for (int i = 0; i < g.intervals + g.order; ++i) {
    spline += static_cast<long double>(e.coeffs[i]) *
              naive_basis(t, i, g.order, xc, g.intervals + g.order - 1);
  }
  return static_cast<double>(e.w_b * silu + e.w_s * spline);
}

// Straight-line forward pass using naive_phi.
inline std::vector<double> naive_forward(const KanModel& m,
                                         std::vector<double> x) {
  for (const KanLayer& l : m.layers) {
    std::vector<long double> y(l.n_out, 0.0L);
    for (int i = 0; i < l.n_in; ++i) {
      for (int j = 0; j < l.n_out; ++j) {
        y[j] += naive_phi(l.edges[i * l.n_out + j], l.grid, x[i]);
      }
    }
    x.assign(y.begin(), y.end());
  }
  return x;
}

// Per-point quantizer written from the definition with long doubles.
inline std::uint64_t naive_quantize(double v, double vmin, double s, int bits) {
  const long double q = std::floor((static_cast<long double>(v) - vmin) / s +
                                   0.5L);
  const long double top = std::ldexp(1.0L, bits) - 1.0L;
  return static_cast<std::uint64_t>(std::min(std::max(q, 0.0L), top));
}

inline Edge random_edge(SplitRng& rng, const Grid& g) {
  Edge e;
  e.w_b = rng.uniform(-1.0, 1.0);
  e.w_s = rng.uniform(-1.5, 1.5);
  e.coeffs.resize(g.num_basis());
  for (double& c : e.coeffs) c = rng.uniform(-1.0, 1.0);
  return e;
}

inline Grid random_grid(SplitRng& rng) {
  const double lo = rng.uniform(-3.0, 1.0);
  const double hi = lo + rng.uniform(0.25, 4.0);
  return Grid{lo, hi, rng.uniform_int(1, 8), rng.uniform_int(0, 4)};
}

// Edge whose phi is the identity on its grid (order >= 1): linear functions
// are reproduced by the Greville abscissae.
inline Edge identity_edge(const Grid& g) {
  Edge e;
  e.w_b = 0.0;
  e.w_s = 1.0;
  const auto t = naive_knots(g.grid_min, g.grid_max, g.intervals, g.order);
  for (int i = 0; i < g.num_basis(); ++i) {
    double s = 0.0;
    for (int m = 1; m <= g.order; ++m) s += t[i + m];
    e.coeffs.push_back(s / g.order);
  }
  return e;
}

}  // namespace kanlut::testing

#endif  // KANLUT_TESTS_TEST_SUPPORT_H_
