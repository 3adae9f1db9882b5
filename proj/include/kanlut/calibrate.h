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

#ifndef KANLUT_CALIBRATE_H_
#define KANLUT_CALIBRATE_H_

#include <map>
#include <span>
#include <tuple>

#include "kanlut/dataset.h"
#include "kanlut/metrics.h"
#include "kanlut/model.h"
#include "kanlut/plan.h"

namespace kanlut {

// Accumulates sum |y[n+1] - y[n]| by summing |end - start| over maximal
// monotone runs, which telescopes exactly for monotone sequences.
class TotalVariation {
 public:
  void add(double y);
  double value() const;

 private:
  bool started_ = false;
  int direction_ = 0;
  double run_start_ = 0.0;
  double prev_ = 0.0;
  double closed_ = 0.0;
};

struct LatticeStats {
  double min = 0.0;
  double max = 0.0;
  double total_variation = 0.0;

  double range() const { return max - min; }
  bool flat() const;
};

// phi over every point of the bits-bit input lattice.
LatticeStats lattice_stats(const Edge& edge, const Grid& grid, int bits);

// Range-trimmed output width with a one-bit floor:
// max(1, ceil(log2(range / step))).
int output_bits(double phi_range, double step);

// Per-edge output width on a lattice: output_bits, widened when the top
// stored code needs more, capped at b_out_global. Flat edges get 1.
int trimmed_output_bits(const LatticeStats& st, double s_out,
                        int b_out_global);

// Sum of absolute consecutive differences after scaling the samples to unit
// range; 0 for constant samples.
double sensitivity(std::span<const double> samples);

struct BitRange {
  int min_bits = 2;
  int max_bits = 24;
};

struct CalibrationOptions {
  MetricBudget budget;
  BitRange in_bits;
  BitRange out_bits;
  int alpha_bits_max = 24;
  std::uint64_t seed = 0;
};

// Holds the model, calibration set, float reference predictions and the
// lattice statistics cache shared by every calibration stage.
class CalibrationContext {
 public:
  CalibrationContext(const KanModel& model, const CalibrationSet& data,
                     CalibrationOptions options);

  const KanModel& model() const { return model_; }
  const CalibrationSet& data() const { return data_; }
  const CalibrationOptions& options() const { return options_; }
  const Matrix& float_predictions() const { return float_pred_; }

  const LatticeStats& stats(int layer, int i, int j, int bits);
  // Degradation of the bit-exact pipeline under `plan` vs the float model.
  double metric(const QuantPlan& plan) const;
  int evaluations() const { return evaluations_; }

 private:
  const KanModel& model_;
  const CalibrationSet& data_;
  CalibrationOptions options_;
  Matrix float_pred_;
  std::map<std::tuple<int, int, int, int>, LatticeStats> cache_;
  mutable int evaluations_ = 0;
};

// Plan with one (b_in, b_out) pair per layer applied to every edge of that
// layer, s_out[j] from the widest contributor of neuron j, and conversions at
// plan n_sig.
QuantPlan make_global_plan(CalibrationContext& ctx, std::span<const int> b_in,
                           std::span<const int> b_out, int n_sig);

QuantPlan calibrate_global(CalibrationContext& ctx);
void fine_grained_outputs(CalibrationContext& ctx, QuantPlan& plan);
void fine_grained_inputs(CalibrationContext& ctx, QuantPlan& plan);
void select_alpha_bits(CalibrationContext& ctx, QuantPlan& plan);

// All four stages in order.
QuantPlan calibrate(CalibrationContext& ctx);

}  // namespace kanlut

#endif  // KANLUT_CALIBRATE_H_
