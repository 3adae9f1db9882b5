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

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
// Tolerances and limits are the constants below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "kanlut/accelerator.h"
#include "kanlut/calibrate.h"
#include "kanlut/eval.h"
#include "kanlut/fixed_point.h"
#include "kanlut/lut_count.h"
#include "kanlut/reference.h"
#include "kanlut/resources.h"
#include "kanlut/simulator.h"
#include "kanlut/synthetic.h"
#include "test_support.h"

namespace kanlut {
namespace {

constexpr double kExhaustiveSecondsLimit = 60.0;
constexpr double kCalibrationSecondsLimit = 600.0;
constexpr double kCalibrationThreshold = 1e-3;
constexpr double kBudgetSlack = 1e-12;  // same slack the calibrator admits with
constexpr int kPropertyInstances = 2000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

bool report(const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
  return o.pass;
}

std::vector<EdgeBits> uniform_edges(const std::vector<int>& shape, int b_in,
                                    int b_out) {
  std::vector<EdgeBits> e;
  for (std::size_t l = 0; l + 1 < shape.size(); ++l) {
    for (int i = 0; i < shape[l]; ++i) {
      for (int j = 0; j < shape[l + 1]; ++j) {
        e.push_back({static_cast<int>(l), i, j, b_in, b_out});
      }
    }
  }
  return e;
}

const std::vector<int> kLutInputs = {4, 6};

Outcome baseline_counts() {
  const KanModel model = random_model({2, 5, 1}, 2025);
  const Dataset data = synthetic_regression(model, 16, 0.0, 1);
  CalibrationContext ctx(model, data, CalibrationOptions{});
  std::vector<std::string> got;
  bool ok = true;
  const auto check = [&](const LutCount& c, std::uint64_t want) {
    got.push_back(c.exact());
    ok = ok && c == LutCount::integer(want);
  };
  for (const auto& [b_in, l4, l6] :
       std::vector<std::tuple<int, std::uint64_t, std::uint64_t>>{
           {16, 1351680, 337920}, {18, 5406720, 1351680}}) {
    const QuantPlan plan = make_global_plan(
        ctx, std::vector<int>{b_in, b_in}, std::vector<int>{22, 22}, 24);
    const ResourceReport r = estimate_model(model, plan, kLutInputs);
    check(r.variants[0].total_theoretical[0], l4);
    check(r.variants[0].total_theoretical[1], l6);
  }
  const std::vector<EdgeBits> mnist = uniform_edges({784, 64, 32, 10}, 4, 5);
  const VariantReport v =
      make_variant("global", mnist, kLutInputs, nullptr, false, false);
  check(v.total_theoretical[0], 262720);
  check(v.total_theoretical[1], 65680);
  ok = ok && mnist.size() == 52544;
  return {ok, fmt::format("(2,5,1) b_in 16: {} / {}; b_in 18: {} / {}; "
                          "(784,64,32,10) over {} edges: {} / {}",
                          got[0], got[1], got[2], got[3], mnist.size(), got[4],
                          got[5])};
}

Outcome fine_output_row() {
  const std::vector<int> shape = {2, 5, 1};
  const std::vector<EdgeBits> global = uniform_edges(shape, 16, 22);
  std::vector<EdgeBits> fine = global;
  // 10 edges at 16 bits and 5 at 15: 235 output bits.
  int total = 0;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    fine[k].b_out = k < 10 ? 16 : 15;
    total += fine[k].b_out;
  }
  const VariantReport base =
      make_variant("global", global, kLutInputs, nullptr, false, false);
  const VariantReport row = make_variant("fine-grained-outputs", fine,
                                         kLutInputs, &base, false, true);
  const std::string pct = format_basis_points(row.savings_bp[0]);
  const bool ok = total == 235 && fine.size() == 15 &&
                  row.total_theoretical[0] == LutCount::integer(962560) &&
                  pct == "28.78%";
  return {ok, fmt::format("{} output bits over {} edges: {} LUT-4s, {} saved",
                          total, fine.size(), row.total_theoretical[0].exact(),
                          pct)};
}

Outcome worked_conversion() {
  const FixedPointScale s = quantize_alpha(0.02, 3);
  const Code q = quant_block(450, FixedPointScale{5, 8, 3}, 0, 4);
  const bool ok = s.mantissa == 5 && s.fraction_bits == 8 &&
                  s.value() == 0.01953125 && q == 9;
  return {ok, fmt::format("quant_block(450, m=5, f=8, B=0, 4 bits) = {}; "
                          "quantize_alpha(0.02, 3) = ({}, {}) = {}",
                          q, s.mantissa, s.fraction_bits, s.value())};
}

Outcome range_bits() {
  const int a = output_bits(1.7, 0.1);
  const int b = output_bits(0.6, 0.1);
  return {a == 5 && b == 3,
          fmt::format("range 1.7 step 0.1 -> {} bits; range 0.6 -> {}", a, b)};
}

// Reduced per-edge input widths below the layer width, outputs re-trimmed.
QuantPlan fine_plan(CalibrationContext& ctx, SplitRng& rng, int b_in0) {
  QuantPlan p = make_global_plan(ctx, std::vector<int>{b_in0, 9},
                                 std::vector<int>{12, 14}, 16);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerQuant& lq = p.layers[l];
    for (EdgeQuant& q : p.edges[l]) {
      q.b_in = rng.uniform_int(2, lq.b_in_global);
      q.s_in_edge = step_for_bits(lq.grid_max - lq.grid_min, q.b_in);
      const LatticeStats& st =
          ctx.stats(static_cast<int>(l), q.source, q.target, q.b_in);
      q.phi_min = st.min;
      q.phi_max = st.max;
      q.delta = round_half_up_to_int(st.min / lq.s_out[q.target]);
      q.b_out = trimmed_output_bits(st, lq.s_out[q.target], lq.b_out_global);
    }
  }
  refresh_conversions(p);
  return p;
}

Outcome exhaustive_equivalence() {
  const auto t0 = Clock::now();
  const KanModel model = random_model({2, 3, 1}, 4242);
  const Dataset data = synthetic_regression(model, 64, 0.0, 3);
  CalibrationContext ctx(model, data, CalibrationOptions{});
  SplitRng rng(99);
  const int b = 8;
  const std::vector<QuantPlan> plans = {
      make_global_plan(ctx, std::vector<int>{b, b}, std::vector<int>{12, 14}, 16),
      fine_plan(ctx, rng, b)};
  const Grid& g = model.layers[0].grid;
  long inferences = 0, mismatches = 0, max_b_in = 0;
  for (const QuantPlan& plan : plans) {
    for (const auto& layer : plan.edges) {
      for (const EdgeQuant& q : layer) max_b_in = std::max<long>(max_b_in, q.b_in);
    }
    const QuantizedReference ref(model, plan);
    const CompiledAccelerator acc = compile_accelerator(model, plan);
    std::vector<LayerStages> stages;
    for (Code c0 = 0; c0 <= max_code(b); ++c0) {
      for (Code c1 = 0; c1 <= max_code(b); ++c1) {
        const std::vector<double> x = {lattice_point(g, b, c0),
                                       lattice_point(g, b, c1)};
        const std::vector<double> y = ref.infer(x, &stages);
        const SimResult s = run_model(acc, x);
        ++inferences;
        if (s.trace.layers != stages || s.outputs != y) ++mismatches;
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = mismatches == 0 && max_b_in <= b &&
                  inferences == 2L * 65536 && secs < kExhaustiveSecondsLimit;
  return {ok, fmt::format("(2,3,1), 2 plans, b_in <= {}: {} inferences, {} "
                          "mismatches, {:.2f} s (limit {:.0f} s)",
                          max_b_in, inferences, mismatches, secs,
                          kExhaustiveSecondsLimit)};
}

bool calibration_passed = false;

Outcome calibration_contract() {
  const auto t0 = Clock::now();
  const KanModel model = random_model({2, 5, 1}, 2025);
  const Dataset data = synthetic_regression(model, 2000, 1e-4, 11);
  CalibrationOptions o;
  o.budget = {MetricKind::kRegression, kCalibrationThreshold};
  CalibrationContext ctx(model, data, o);
  const QuantPlan plan = calibrate(ctx);
  const double secs = seconds_since(t0);

  // Re-evaluate from scratch through the compiled accelerator.
  const CompiledAccelerator acc = compile_accelerator(model, plan);
  const EvalReport r = compare(model, plan, acc, data);
  bool within = true;
  int total_in = 0, total_out = 0, edges = 0;
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    for (const EdgeQuant& q : plan.edges[l]) {
      within = within && q.b_in <= plan.layers[l].b_in_global &&
               q.b_out <= plan.layers[l].b_out_global;
      total_in += q.b_in;
      total_out += q.b_out;
      ++edges;
    }
  }
  const bool ok = r.degradation <= kCalibrationThreshold + kBudgetSlack &&
                  within && o.in_bits.min_bits == 2 &&
                  o.in_bits.max_bits == 24 && o.out_bits.max_bits == 24 &&
                  secs < kCalibrationSecondsLimit;
  calibration_passed = ok;
  return {ok, fmt::format("2000 samples, sigma 1e-4: re-evaluated degradation "
                          "{:.6e} (threshold {:g}), global b_in/b_out {}/{} "
                          "and {}/{}, {} edges with {} input and {} output "
                          "bits, all within global, n_sig {}, {:.1f} s "
                          "(limit {:.0f} s)",
                          r.degradation, kCalibrationThreshold,
                          plan.layers[0].b_in_global,
                          plan.layers[0].b_out_global,
                          plan.layers[1].b_in_global,
                          plan.layers[1].b_out_global, edges, total_in,
                          total_out, plan.n_sig, secs,
                          kCalibrationSecondsLimit)};
}

Outcome quantizer_invariants() {
  SplitRng rng(2026);
  int dequant_bad = 0, sens_bad = 0, alpha_bad = 0, lossless_bad = 0;
  for (int n = 0; n < kPropertyInstances; ++n) {
    const int bits = rng.uniform_int(1, 24);
    const double lo = rng.uniform(-10.0, 10.0);
    const double range = rng.uniform(1e-3, 50.0);
    const double s = range / static_cast<double>(max_code(bits));
    const double v = rng.uniform(lo, lo + range);
    const Code q = uniform_quantize(v, lo, s, bits);
    // Rounding slack for forming lo + q*s in double.
    if (std::fabs(lo + q * s - v) > s / 2 + 1e-12 * (1.0 + std::fabs(v))) {
      ++dequant_bad;
    }
  }
  for (int n = 0; n < kPropertyInstances; ++n) {
    std::vector<double> y(rng.uniform_int(2, 300));
    double v = rng.uniform(-1e3, 1e3);
    const double scale = std::exp2(rng.uniform(-10, 10));
    for (double& e : y) {
      e = v;
      v += rng.uniform() < 0.2 ? 0.0 : rng.uniform() * scale;
    }
    y.back() += scale;
    if (n % 2) std::reverse(y.begin(), y.end());
    if (sensitivity(y) != 1.0) ++sens_bad;
  }
  for (int n = 0; n < kPropertyInstances; ++n) {
    const int sig = rng.uniform_int(1, 24);
    const double alpha = std::exp2(rng.uniform(-30.0, 30.0));
    const FixedPointScale f = quantize_alpha(alpha, sig);
    if (std::fabs(f.value() - alpha) / alpha > std::exp2(-sig)) ++alpha_bad;
  }
  for (int n = 0; n < kPropertyInstances; ++n) {
    const Grid g = testing::random_grid(rng);
    const Edge e = testing::random_edge(rng, g);
    const int b_in = rng.uniform_int(1, 8);
    const int b_global = rng.uniform_int(2, 24);
    const LatticeStats st = lattice_stats(e, g, b_in);
    const double widest = st.range() * rng.uniform(1.0, 4.0);
    const double s_out = std::max(step_for_bits(widest, b_global), 1e-300);
    EdgeQuant wide;
    wide.b_in = b_in;
    wide.b_out = b_global;
    wide.phi_min = st.min;
    EdgeQuant narrow = wide;
    narrow.b_out = trimmed_output_bits(st, s_out, b_global);
    bool same = narrow.b_out <= b_global;
    for (Code c = 0; same && c <= max_code(b_in); ++c) {
      same = table_entry(e, g, narrow, s_out, c) ==
             table_entry(e, g, wide, s_out, c);
    }
    if (!same) ++lossless_bad;
  }
  const bool ok = dequant_bad + sens_bad + alpha_bad + lossless_bad == 0;
  return {ok, fmt::format("{} instances each; violations: dequantization {}, "
                          "monotone sensitivity {}, scale error {}, output "
                          "trimming {}",
                          kPropertyInstances, dequant_bad, sens_bad, alpha_bad,
                          lossless_bad)};
}

}  // namespace
}  // namespace kanlut

int main() {
  using namespace kanlut;
  report("baseline LUT counts", baseline_counts);
  report("fine-grained output row", fine_output_row);
  report("fixed-point conversion example", worked_conversion);
  report("range-trimmed output bits", range_bits);
  const bool exact = report("exhaustive bit-exact equivalence",
                            exhaustive_equivalence);
  report("calibration contract", calibration_contract);
  report("quantizer invariants", quantizer_invariants);
  report("fidelity substitution", [&] {
    return Outcome{exact && calibration_passed,
                   "end-task accuracy, latency and energy of trained "
                   "hardware builds are not targets; covered by the "
                   "bit-exact and calibration criteria"};
  });
  return failures == 0 ? 0 : 1;
}
