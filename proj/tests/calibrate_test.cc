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

#include "kanlut/calibrate.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "kanlut/error.h"
#include "kanlut/reference.h"
#include "test_support.h"

namespace kanlut {
namespace {

TEST(OutputBits, RangeOverStep) {
  EXPECT_EQ(output_bits(1.7, 0.1), 5);
  EXPECT_EQ(output_bits(0.6, 0.1), 3);
  EXPECT_EQ(output_bits(0.05, 0.1), 1);
  EXPECT_EQ(output_bits(0.0, 0.1), 1);
  EXPECT_EQ(output_bits(1.6, 0.1), 4);
}

TEST(Sensitivity, MonotoneSequencesGiveExactlyOne) {
  SplitRng rng(50);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> y(rng.uniform_int(2, 300));
    double v = rng.uniform(-1e3, 1e3);
    const double scale = std::exp2(rng.uniform(-10, 10));
    for (double& s : y) {
      s = v;
      // Plateaus are allowed: non-decreasing is enough.
      v += rng.uniform() < 0.2 ? 0.0 : rng.uniform() * scale;
    }
    y.back() = y.back() + scale;
    if (trial % 2) std::reverse(y.begin(), y.end());
    EXPECT_EQ(sensitivity(y), 1.0);
  }
}

TEST(Sensitivity, TriangleConstantAndShortInput) {
  EXPECT_EQ(sensitivity(std::vector<double>{0, 0.5, 1, 0.5, 0}), 2.0);
  EXPECT_EQ(sensitivity(std::vector<double>{3, 3, 3}), 0.0);
  EXPECT_THROW(sensitivity(std::vector<double>{1.0}), StructuralError);
}

TEST(LatticeStats, MatchesDirectScan) {
  SplitRng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid g = testing::random_grid(rng);
    const Edge e = testing::random_edge(rng, g);
    const int bits = rng.uniform_int(1, 10);
    const LatticeStats st = lattice_stats(e, g, bits);
    double mn = INFINITY, mx = -INFINITY, tv = 0.0, prev = 0.0;
    for (std::uint64_t c = 0; c <= max_code(bits); ++c) {
      const double y = testing::naive_phi(e, g, lattice_point(g, bits, c));
      mn = std::min(mn, y);
      mx = std::max(mx, y);
      if (c) tv += std::fabs(y - prev);
      prev = y;
    }
    EXPECT_NEAR(st.min, mn, 1e-12);
    EXPECT_NEAR(st.max, mx, 1e-12);
    EXPECT_NEAR(st.total_variation, tv, 1e-9);
  }
}

// Trimming output widths never changes a stored code.
TEST(FineOutputs, TrimmingIsLossless) {
  SplitRng rng(52);
  for (int trial = 0; trial < 1000; ++trial) {
    const Grid g = testing::random_grid(rng);
    const Edge e = testing::random_edge(rng, g);
    const int b_in = rng.uniform_int(1, 9);
    const int b_global = rng.uniform_int(2, 24);
    const LatticeStats st = lattice_stats(e, g, b_in);
    // A neuron's step comes from its widest contributor.
    const double widest = st.range() * rng.uniform(1.0, 4.0);
    const double s_out = std::max(step_for_bits(widest, b_global), 1e-300);
    const int trimmed = trimmed_output_bits(st, s_out, b_global);
    ASSERT_LE(trimmed, b_global);
    EdgeQuant wide;
    wide.b_in = b_in;
    wide.b_out = b_global;
    wide.phi_min = st.min;
    EdgeQuant narrow = wide;
    narrow.b_out = trimmed;
    for (std::uint64_t c = 0; c <= max_code(b_in); ++c) {
      ASSERT_EQ(table_entry(e, g, narrow, s_out, c),
                table_entry(e, g, wide, s_out, c))
          << "trial " << trial << " code " << c;
    }
  }
}

struct Small {
  KanModel model = random_model({2, 3, 1}, 60);
  Dataset data = synthetic_regression(model, 300, 1e-4, 61);
};

CalibrationOptions options(double threshold) {
  CalibrationOptions o;
  o.budget = {MetricKind::kRegression, threshold};
  o.in_bits = {2, 14};
  o.out_bits = {2, 16};
  o.alpha_bits_max = 24;
  return o;
}

TEST(Calibrate, MeetsBudgetWithEdgeBitsWithinGlobal) {
  Small s;
  CalibrationContext ctx(s.model, s.data, options(2e-3));
  const QuantPlan p = calibrate(ctx);
  EXPECT_TRUE(validate_plan(p, s.model).empty());
  EXPECT_LE(p.meta.metric_value, 2e-3 + kMetricSlack);
  EXPECT_EQ(p.meta.stage, "final");
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    for (const EdgeQuant& e : p.edges[l]) {
      EXPECT_LE(e.b_in, p.layers[l].b_in_global);
      EXPECT_LE(e.b_out, p.layers[l].b_out_global);
    }
  }
  // Independent re-evaluation of the stored metric.
  const QuantizedReference ref(s.model, p);
  EXPECT_EQ(degradation(ctx.float_predictions(), ref.infer_batch(s.data.inputs),
                        s.data),
            p.meta.metric_value);
}

TEST(Calibrate, Deterministic) {
  Small s;
  CalibrationContext a(s.model, s.data, options(2e-3));
  CalibrationContext b(s.model, s.data, options(2e-3));
  EXPECT_EQ(serialize_plan(calibrate(a)), serialize_plan(calibrate(b)));
}

TEST(Calibrate, FineOutputsKeepTheMetric) {
  Small s;
  CalibrationContext ctx(s.model, s.data, options(2e-3));
  QuantPlan p = calibrate_global(ctx);
  const double before = p.meta.metric_value;
  fine_grained_outputs(ctx, p);
  EXPECT_EQ(p.meta.metric_value, before);
}

TEST(Calibrate, UnboundedBudgetTakesMinimumWidths) {
  Small s;
  CalibrationContext ctx(s.model, s.data, options(INFINITY));
  const QuantPlan p = calibrate(ctx);
  for (const LayerQuant& l : p.layers) {
    EXPECT_EQ(l.b_in_global, 2);
    EXPECT_EQ(l.b_out_global, 2);
  }
  EXPECT_EQ(p.n_sig, 1);
}

TEST(Calibrate, UnreachableBudgetThrows) {
  Small s;
  CalibrationContext ctx(s.model, s.data, options(-1.0));
  EXPECT_THROW(calibrate_global(ctx), CalibrationError);
}

TEST(Calibrate, RejectsBadOptions) {
  Small s;
  CalibrationOptions o = options(1e-3);
  o.in_bits = {5, 3};
  EXPECT_THROW(CalibrationContext(s.model, s.data, o), ValidationError);
  Dataset wrong = s.data;
  wrong.inputs.cols = 1;
  wrong.inputs.data.resize(wrong.inputs.rows);
  EXPECT_THROW(CalibrationContext(s.model, wrong, options(1e-3)),
               ValidationError);
}

}  // namespace
}  // namespace kanlut
