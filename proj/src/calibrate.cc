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

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kanlut/error.h"
#include "kanlut/reference.h"

namespace kanlut {
namespace {

constexpr double kFlatTolerance = 1e-12;
constexpr double kDegenerateStep = 1.0 / 65536.0;

void assign_edge_outputs(EdgeQuant& q, const LatticeStats& st, double s_out,
                         int b_out_global) {
  q.phi_min = st.min;
  q.phi_max = st.max;
  q.delta = round_half_up_to_int(st.min / s_out);
  q.b_out = trimmed_output_bits(st, s_out, b_out_global);
}

void stamp(CalibrationContext& ctx, QuantPlan& plan, const char* stage) {
  plan.meta.metric = ctx.options().budget.kind;
  plan.meta.threshold = ctx.options().budget.threshold;
  plan.meta.calibration_digest = dataset_digest(ctx.data());
  plan.meta.seed = ctx.options().seed;
  plan.meta.stage = stage;
  plan.meta.metric_value = ctx.metric(plan);
}

}  // namespace

void TotalVariation::add(double y) {
  if (!started_) {
    started_ = true;
    run_start_ = prev_ = y;
    return;
  }
  const double d = y - prev_;
  if (d != 0.0) {
    const int dir = d > 0.0 ? 1 : -1;
    if (direction_ != 0 && dir != direction_) {
      closed_ += std::fabs(prev_ - run_start_);
      run_start_ = prev_;
    }
    direction_ = dir;
  }
  prev_ = y;
}

double TotalVariation::value() const {
  return closed_ + std::fabs(prev_ - run_start_);
}

bool LatticeStats::flat() const {
  const double scale = std::max({1.0, std::fabs(min), std::fabs(max)});
  return range() <= kFlatTolerance * scale;
}

LatticeStats lattice_stats(const Edge& edge, const Grid& grid, int bits) {
  KANLUT_CHECK(bits >= 1 && bits <= kMaxInputBits, "bits out of range");
  LatticeStats st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -st.min;
  TotalVariation tv;
  const std::uint64_t n = max_code(bits) + 1;
  for (std::uint64_t c = 0; c < n; ++c) {
    const double y =
        phi_eval(edge, grid, lattice_point(grid, bits, static_cast<Code>(c)));
    st.min = std::min(st.min, y);
    st.max = std::max(st.max, y);
    tv.add(y);
  }
  st.total_variation = tv.value();
  return st;
}

int output_bits(double phi_range, double step) {
  KANLUT_CHECK(step > 0.0 && phi_range >= 0.0, "bad output_bits arguments");
  const double ratio = phi_range / step;
  if (!(ratio > 1.0)) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::log2(ratio))));
}

int trimmed_output_bits(const LatticeStats& st, double s_out,
                        int b_out_global) {
  if (st.flat()) return 1;
  const Code top = uniform_quantize(st.max, st.min, s_out, b_out_global);
  const int needed = std::max(output_bits(st.range(), s_out), bit_width(top));
  return std::clamp(needed, 1, b_out_global);
}

double sensitivity(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw StructuralError("sensitivity needs at least two samples");
  }
  LatticeStats st;
  st.min = *std::min_element(samples.begin(), samples.end());
  st.max = *std::max_element(samples.begin(), samples.end());
  if (st.flat()) return 0.0;
  TotalVariation tv;
  for (double y : samples) tv.add(y);
  return tv.value() / st.range();
}

CalibrationContext::CalibrationContext(const KanModel& model,
                                       const CalibrationSet& data,
                                       CalibrationOptions options)
    : model_(model), data_(data), options_(options) {
  auto v = validate_dataset(data);
  if (data.inputs.cols != static_cast<std::size_t>(model.num_inputs())) {
    v.push_back(fmt::format("calibration set has {} inputs, model expects {}",
                            data.inputs.cols, model.num_inputs()));
  }
  if (data.kind == MetricKind::kRegression &&
      data.targets.cols != static_cast<std::size_t>(model.num_outputs())) {
    v.push_back("calibration targets do not match model outputs");
  }
  if (data.kind != options.budget.kind) {
    v.push_back("calibration set kind differs from the metric kind");
  }
  const auto bad_range = [](BitRange r) {
    return r.min_bits < 1 || r.max_bits > 24 || r.min_bits > r.max_bits;
  };
  if (bad_range(options.in_bits) || bad_range(options.out_bits)) {
    v.push_back("bit search ranges must satisfy 1 <= min <= max <= 24");
  }
  if (options.alpha_bits_max < 1 || options.alpha_bits_max > 32) {
    v.push_back("alpha_bits_max must be in [1, 32]");
  }
  if (!v.empty()) throw ValidationError(std::move(v));

  float_pred_.rows = data.size();
  float_pred_.cols = model.num_outputs();
  for (std::size_t r = 0; r < data.size(); ++r) {
    auto y = forward_float(model, {data.inputs.row(r), data.inputs.cols});
    float_pred_.data.insert(float_pred_.data.end(), y.begin(), y.end());
  }
}

const LatticeStats& CalibrationContext::stats(int layer, int i, int j,
                                              int bits) {
  const auto key = std::make_tuple(layer, i, j, bits);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    const KanLayer& ml = model_.layers[layer];
    it = cache_.emplace(key, lattice_stats(ml.edge(i, j), ml.grid, bits)).first;
  }
  return it->second;
}

double CalibrationContext::metric(const QuantPlan& plan) const {
  ++evaluations_;
  const QuantizedReference ref(model_, plan);
  return degradation(float_pred_, ref.infer_batch(data_.inputs), data_);
}

QuantPlan make_global_plan(CalibrationContext& ctx, std::span<const int> b_in,
                           std::span<const int> b_out, int n_sig) {
  const KanModel& model = ctx.model();
  KANLUT_CHECK(b_in.size() == model.layers.size() &&
                   b_out.size() == model.layers.size(),
               "one bit pair per layer");
  QuantPlan plan;
  plan.n_sig = n_sig;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const KanLayer& ml = model.layers[l];
    const int li = static_cast<int>(l);
    LayerQuant lq;
    lq.grid_min = ml.grid.grid_min;
    lq.grid_max = ml.grid.grid_max;
    lq.b_in_global = b_in[l];
    lq.s_in = step_for_bits(lq.grid_max - lq.grid_min, b_in[l]);

    bool any_varying = false;
    std::vector<double> widest(ml.n_out, 0.0);
    for (int i = 0; i < ml.n_in; ++i) {
      for (int j = 0; j < ml.n_out; ++j) {
        const LatticeStats& st = ctx.stats(li, i, j, b_in[l]);
        if (!st.flat()) {
          any_varying = true;
          widest[j] = std::max(widest[j], st.range());
        }
      }
    }
    lq.b_out_global = any_varying ? b_out[l] : 1;
    lq.s_out.assign(ml.n_out, 0.0);
    double smallest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < ml.n_out; ++j) {
      if (widest[j] > 0.0) {
        lq.s_out[j] = step_for_bits(widest[j], lq.b_out_global);
        smallest = std::min(smallest, lq.s_out[j]);
      }
    }
    for (double& s : lq.s_out) {
      if (s == 0.0) s = std::isfinite(smallest) ? smallest : kDegenerateStep;
    }

    std::vector<EdgeQuant> edges(ml.edges.size());
    for (int i = 0; i < ml.n_in; ++i) {
      for (int j = 0; j < ml.n_out; ++j) {
        EdgeQuant& q = edges[i * ml.n_out + j];
        q.layer = li;
        q.source = i;
        q.target = j;
        q.b_in = b_in[l];
        q.s_in_edge = lq.s_in;
        assign_edge_outputs(q, ctx.stats(li, i, j, b_in[l]), lq.s_out[j],
                            lq.b_out_global);
        q.b_out = lq.b_out_global;
      }
    }
    plan.layers.push_back(std::move(lq));
    plan.edges.push_back(std::move(edges));
  }
  refresh_conversions(plan);
  return plan;
}

QuantPlan calibrate_global(CalibrationContext& ctx) {
  const CalibrationOptions& opt = ctx.options();
  const std::size_t n_layers = ctx.model().layers.size();
  std::vector<int> b_in(n_layers, opt.in_bits.max_bits);
  std::vector<int> b_out(n_layers, opt.out_bits.max_bits);
  const int n_sig = opt.alpha_bits_max;

  QuantPlan plan = make_global_plan(ctx, b_in, b_out, n_sig);
  const double at_max = ctx.metric(plan);
  if (!opt.budget.admits(at_max)) {
    throw CalibrationError(
        fmt::format("threshold {} unreachable at {} input / {} output bits; "
                    "best metric {}",
                    opt.budget.threshold, opt.in_bits.max_bits,
                    opt.out_bits.max_bits, at_max),
        at_max);
  }

  // Coordinate descent: each coordinate takes the smallest width, searched
  // upward from the range minimum, that keeps the pipeline within budget.
  bool changed = true;
  for (int pass = 0; changed && pass < 8; ++pass) {
    changed = false;
    for (std::size_t l = 0; l < n_layers; ++l) {
      for (int coord = 0; coord < 2; ++coord) {
        std::vector<int>& bits = coord == 0 ? b_in : b_out;
        const BitRange range = coord == 0 ? opt.in_bits : opt.out_bits;
        if (coord == 1 && plan.layers[l].b_out_global == 1) continue;
        for (int b = range.min_bits; b < bits[l]; ++b) {
          std::vector<int> trial_bits = bits;
          trial_bits[l] = b;
          QuantPlan trial =
              coord == 0 ? make_global_plan(ctx, trial_bits, b_out, n_sig)
                         : make_global_plan(ctx, b_in, trial_bits, n_sig);
          if (opt.budget.admits(ctx.metric(trial))) {
            bits[l] = b;
            plan = std::move(trial);
            changed = true;
            break;
          }
        }
      }
    }
  }
  stamp(ctx, plan, "global");
  return plan;
}

void fine_grained_outputs(CalibrationContext& ctx, QuantPlan& plan) {
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const LayerQuant& lq = plan.layers[l];
    for (EdgeQuant& q : plan.edges[l]) {
      assign_edge_outputs(
          q, ctx.stats(static_cast<int>(l), q.source, q.target, q.b_in),
          lq.s_out[q.target], lq.b_out_global);
    }
  }
  refresh_conversions(plan);
  stamp(ctx, plan, "fine-grained-outputs");
}

void fine_grained_inputs(CalibrationContext& ctx, QuantPlan& plan) {
  struct Ranked {
    double sensitivity;
    int layer, i, j;
  };
  std::vector<Ranked> order;
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const int full = plan.layers[l].b_in_global;
    for (const EdgeQuant& q : plan.edges[l]) {
      const LatticeStats& st =
          ctx.stats(static_cast<int>(l), q.source, q.target, full);
      const double e = st.flat() ? 0.0 : st.total_variation / st.range();
      order.push_back({e, static_cast<int>(l), q.source, q.target});
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Ranked& a, const Ranked& b) {
                     return a.sensitivity < b.sensitivity;
                   });

  // An edge whose reduction was rejected stays frozen: later reductions only
  // add error elsewhere.
  const MetricBudget& budget = ctx.options().budget;
  std::vector<bool> frozen(order.size(), false);
  bool kept_any = true;
  while (kept_any) {
    kept_any = false;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Ranked& r = order[k];
      const EdgeQuant& current = plan.edge(r.layer, r.i, r.j);
      if (frozen[k] || current.b_in <= 1) continue;
      QuantPlan trial = plan;
      EdgeQuant& q = trial.edge(r.layer, r.i, r.j);
      const LayerQuant& lq = trial.layers[r.layer];
      q.b_in -= 1;
      q.s_in_edge = step_for_bits(lq.grid_max - lq.grid_min, q.b_in);
      assign_edge_outputs(q, ctx.stats(r.layer, r.i, r.j, q.b_in),
                          lq.s_out[r.j], lq.b_out_global);
      // The new lattice may need a wider output; never let that cost more
      // LUTs than the reduction saves.
      const bool cheaper = q.b_out <= 2 * current.b_out;
      refresh_conversions(trial);
      if (cheaper && budget.admits(ctx.metric(trial))) {
        plan = std::move(trial);
        kept_any = true;
      } else {
        frozen[k] = true;
      }
    }
  }
  stamp(ctx, plan, "fine-grained-inputs");
}

void select_alpha_bits(CalibrationContext& ctx, QuantPlan& plan) {
  const MetricBudget& budget = ctx.options().budget;
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= ctx.options().alpha_bits_max; ++n) {
    QuantPlan trial = plan;
    trial.n_sig = n;
    refresh_conversions(trial);
    const double m = ctx.metric(trial);
    best = std::min(best, m);
    if (budget.admits(m)) {
      plan = std::move(trial);
      stamp(ctx, plan, "final");
      return;
    }
  }
  throw CalibrationError(
      fmt::format("no n_sig in [1, {}] meets threshold {}; best metric {}",
                  ctx.options().alpha_bits_max, budget.threshold, best),
      best);
}

QuantPlan calibrate(CalibrationContext& ctx) {
  QuantPlan plan = calibrate_global(ctx);
  fine_grained_outputs(ctx, plan);
  fine_grained_inputs(ctx, plan);
  select_alpha_bits(ctx, plan);
  return plan;
}

}  // namespace kanlut
