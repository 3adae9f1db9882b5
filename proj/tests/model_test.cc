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

#include <gtest/gtest.h>

#include <cmath>

#include "kanlut/error.h"
#include "test_support.h"

namespace kanlut {
namespace {

TEST(Silu, MatchesLongDoubleReference) {
  SplitRng rng(10);
  for (int n = 0; n < 2000; ++n) {
    const double x = rng.uniform(-40.0, 40.0);
    const long double xl = x;
    const double ref = static_cast<double>(xl / (1.0L + std::exp(-xl)));
    EXPECT_NEAR(silu(x), ref, 1e-15 * std::max(1.0, std::fabs(ref)));
  }
  EXPECT_EQ(silu(0.0), 0.0);
  EXPECT_NEAR(silu(-800.0), 0.0, 1e-300);
  EXPECT_EQ(silu(800.0), 800.0);
}

TEST(PhiEval, MatchesTermByTermEvaluation) {
  SplitRng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Grid g = testing::random_grid(rng);
    const Edge e = testing::random_edge(rng, g);
    for (int s = 0; s < 10; ++s) {
      // Include points beyond the grid, which clamp.
      const double x = rng.uniform(g.grid_min - 1.0, g.grid_max + 1.0);
      EXPECT_NEAR(phi_eval(e, g, x), testing::naive_phi(e, g, x), 1e-12);
    }
  }
}

TEST(PhiEval, ClampsBeforeBothBranches) {
  const Grid g{-1.0, 1.0, 3, 2};
  Edge e;
  e.w_b = 1.0;
  e.w_s = 0.0;
  e.coeffs.assign(g.num_basis(), 0.0);
  EXPECT_EQ(phi_eval(e, g, 5.0), silu(1.0));
  EXPECT_EQ(phi_eval(e, g, -5.0), silu(-1.0));
}

TEST(PhiEval, IdentityEdgeReproducesX) {
  const Grid g{0.0, 1.0, 4, 3};
  const Edge e = testing::identity_edge(g);
  for (double x = 0.0; x <= 1.0; x += 1.0 / 64) {
    EXPECT_NEAR(phi_eval(e, g, x), x, 1e-14);
  }
}

TEST(ForwardFloat, MatchesStraightLineImplementation) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SplitRng rng(seed);
    const std::vector<int> shape = {rng.uniform_int(1, 4), rng.uniform_int(1, 5),
                                    rng.uniform_int(1, 3)};
    const KanModel m = random_model(shape, seed);
    for (int s = 0; s < 10; ++s) {
      std::vector<double> x(shape[0]);
      for (double& v : x) v = rng.uniform(-1.2, 1.2);
      const auto got = forward_float(m, x);
      const auto want = testing::naive_forward(m, x);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_NEAR(got[k], want[k], 1e-11);
      }
    }
  }
}

TEST(ForwardFloat, RejectsWrongInputWidth) {
  const KanModel m = random_model({2, 3, 1}, 1);
  EXPECT_THROW(forward_float(m, std::vector<double>{1.0}), StructuralError);
}

TEST(ValidateModel, ReportsEveryViolation) {
  KanModel m = random_model({2, 3, 1}, 1);
  EXPECT_TRUE(validate_model(m).empty());
  m.layers[0].edges[1].coeffs.pop_back();
  m.layers[1].grid.grid_max = m.layers[1].grid.grid_min;
  m.layers[1].n_in = 4;
  const auto v = validate_model(m);
  EXPECT_GE(v.size(), 3u);
  bool names_edge = false;
  for (const auto& s : v) {
    names_edge = names_edge || s.find("layer 0 edge (0, 1)") != std::string::npos;
  }
  EXPECT_TRUE(names_edge);
}

TEST(ValidateModel, RejectsNonFiniteWeights) {
  KanModel m = random_model({1, 1}, 3);
  m.layers[0].edges[0].w_b = NAN;
  EXPECT_FALSE(validate_model(m).empty());
}

TEST(Model, ShapeAndEdgeCount) {
  const KanModel m = random_model({784, 4, 2}, 1, {.fit_grids = false});
  EXPECT_EQ(m.shape(), (std::vector<int>{784, 4, 2}));
  EXPECT_EQ(m.num_edges(), 784u * 4 + 4 * 2);
}

}  // namespace
}  // namespace kanlut
