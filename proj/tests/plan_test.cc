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

#include "kanlut/plan.h"

#include <gtest/gtest.h>

#include <cmath>

#include "kanlut/calibrate.h"
#include "kanlut/error.h"
#include "test_support.h"

namespace kanlut {
namespace {

struct Fixture {
  KanModel model = random_model({2, 3, 2}, 40);
  Dataset data = synthetic_regression(model, 100, 0.0, 41);
  CalibrationOptions options{{MetricKind::kRegression, 1e-2}, {}, {}, 24, 5};
  CalibrationContext ctx{model, data, options};
};

TEST(Lattice, EndpointsExact) {
  const Grid g{-0.7, 1.3, 5, 3};
  for (int bits : {1, 4, 13}) {
    EXPECT_EQ(lattice_point(g, bits, 0), -0.7);
    EXPECT_EQ(lattice_point(g, bits, static_cast<Code>(max_code(bits))), 1.3);
  }
  EXPECT_DOUBLE_EQ(step_for_bits(3.1, 5), 0.1);
}

TEST(Plan, RoundTripIsExact) {
  Fixture f;
  const std::vector<int> bi = {9, 7}, bo = {10, 8};
  QuantPlan p = make_global_plan(f.ctx, bi, bo, 16);
  p.meta.threshold = INFINITY;
  p.meta.calibration_digest = "abc";
  const std::string text = serialize_plan(p);
  const QuantPlan back = parse_plan(text);
  EXPECT_EQ(back, p);
  EXPECT_EQ(serialize_plan(back), text);
}

TEST(Plan, GlobalPlanShape) {
  Fixture f;
  const std::vector<int> bi = {9, 7}, bo = {10, 8};
  const QuantPlan p = make_global_plan(f.ctx, bi, bo, 16);
  EXPECT_TRUE(validate_plan(p, f.model).empty());
  EXPECT_EQ(p.num_edges(), 12u);
  for (std::size_t l = 0; l < 2; ++l) {
    for (const EdgeQuant& e : p.edges[l]) {
      EXPECT_EQ(e.b_in, bi[l]);
      EXPECT_EQ(e.b_out, bo[l]);
    }
  }
  // Layer 0 converts nothing; layer 1 carries a ratio of steps.
  EXPECT_EQ(p.edge(0, 1, 2).alpha, (FixedPointScale{1, 0, 1}));
  const EdgeQuant& e = p.edge(1, 2, 1);
  const double ratio = p.layers[0].s_out[2] / e.s_in_edge;
  EXPECT_LE(std::fabs(e.alpha.value() - ratio) / ratio, std::exp2(-16));
}

TEST(Plan, BiasFusesUpstreamOffsets) {
  Fixture f;
  const std::vector<int> bi = {8, 8}, bo = {8, 8};
  const QuantPlan p = make_global_plan(f.ctx, bi, bo, 20);
  for (int j = 0; j < 3; ++j) {
    std::int64_t sum = 0;
    for (int i = 0; i < 2; ++i) sum += p.edge(0, i, j).delta;
    const double s_prev = p.layers[0].s_out[j];
    const std::int64_t expect =
        sum - static_cast<std::int64_t>(std::floor(p.layers[1].grid_min / s_prev + 0.5));
    for (int k = 0; k < 2; ++k) EXPECT_EQ(p.edge(1, j, k).bias, expect);
  }
}

TEST(Plan, ValidationCatchesInconsistency) {
  Fixture f;
  const std::vector<int> bi = {8, 8}, bo = {8, 8};
  QuantPlan p = make_global_plan(f.ctx, bi, bo, 20);
  QuantPlan bad = p;
  bad.edge(0, 0, 0).b_in = 9;
  EXPECT_FALSE(validate_plan(bad).empty());
  bad = p;
  bad.edge(1, 0, 0).delta += 1;
  EXPECT_FALSE(validate_plan(bad).empty());
  bad = p;
  bad.layers[1].s_out[0] = -1.0;
  EXPECT_FALSE(validate_plan(bad).empty());
  bad = p;
  bad.layers[0].grid_max += 1.0;
  EXPECT_FALSE(validate_plan(bad, f.model).empty());
  EXPECT_THROW(parse_plan("{\"format_version\": 1}"), ValidationError);
  EXPECT_THROW(parse_plan("not json"), ValidationError);
}

}  // namespace
}  // namespace kanlut
