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

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "kanlut/error.h"
#include "kanlut/io_util.h"

namespace kanlut {

using nlohmann::json;

std::size_t QuantPlan::num_edges() const {
  std::size_t n = 0;
  for (const auto& l : edges) n += l.size();
  return n;
}

double step_for_bits(double range, int bits) {
  return range / static_cast<double>(max_code(bits));
}

double lattice_point(const Grid& grid, int bits, Code c) {
  if (c >= max_code(bits)) return grid.grid_max;
  return grid.grid_min +
         static_cast<double>(c) *
             step_for_bits(grid.grid_max - grid.grid_min, bits);
}

Code table_entry(const Edge& edge, const Grid& grid, const EdgeQuant& q,
                 double s_out, Code c) {
  const double y = phi_eval(edge, grid, lattice_point(grid, q.b_in, c));
  return uniform_quantize(y, q.phi_min, s_out, q.b_out);
}

void refresh_conversions(QuantPlan& plan) {
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    for (auto& e : plan.edges[l]) {
      if (l == 0) {
        e.alpha = FixedPointScale{1, 0, 1};
        e.bias = 0;
        continue;
      }
      const LayerQuant& prev = plan.layers[l - 1];
      const double s_prev = prev.s_out[e.source];
      e.alpha = quantize_alpha(s_prev / e.s_in_edge, plan.n_sig);
      std::int64_t offsets = 0;
      for (int i = 0; i < plan.n_in(l - 1); ++i) {
        offsets += plan.edge(l - 1, i, e.source).delta;
      }
      e.bias = offsets - round_half_up_to_int(plan.layers[l].grid_min / s_prev);
    }
  }
}

std::vector<std::string> validate_plan(const QuantPlan& plan) {
  std::vector<std::string> v;
  if (plan.layers.empty() || plan.layers.size() != plan.edges.size()) {
    v.push_back("plan: layer and edge lists disagree");
    return v;
  }
  if (plan.n_sig < 1 || plan.n_sig > 62) v.push_back("plan: n_sig out of range");
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const LayerQuant& lq = plan.layers[l];
    if (lq.s_out.empty() || plan.edges[l].size() % lq.s_out.size() != 0) {
      v.push_back(fmt::format("plan layer {}: edge count not n_in*n_out", l));
      continue;
    }
    if (lq.b_in_global < 1 || lq.b_in_global > kMaxInputBits ||
        lq.b_out_global < 1 || lq.b_out_global > kMaxCodeBits) {
      v.push_back(fmt::format("plan layer {}: global bits out of range", l));
    }
    if (!(lq.s_in > 0.0)) v.push_back(fmt::format("plan layer {}: s_in <= 0", l));
    for (double s : lq.s_out) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        v.push_back(fmt::format("plan layer {}: s_out must be positive", l));
        break;
      }
    }
    if (l + 1 < plan.layers.size() &&
        plan.edges[l + 1].size() !=
            lq.s_out.size() * plan.layers[l + 1].s_out.size()) {
      v.push_back(fmt::format("plan layer {}: width mismatch with next", l));
    }
    const int n_out = static_cast<int>(lq.s_out.size());
    for (std::size_t idx = 0; idx < plan.edges[l].size(); ++idx) {
      const EdgeQuant& e = plan.edges[l][idx];
      const int i = static_cast<int>(idx) / n_out;
      const int j = static_cast<int>(idx) % n_out;
      const std::string where = fmt::format("plan layer {} edge ({}, {})", l, i, j);
      if (e.layer != static_cast<int>(l) || e.source != i || e.target != j) {
        v.push_back(where + ": identity mismatch");
      }
      if (e.b_in < 1 || e.b_in > lq.b_in_global) {
        v.push_back(where + ": b_in outside [1, b_in_global]");
      }
      if (e.b_out < 1 || e.b_out > lq.b_out_global) {
        v.push_back(where + ": b_out outside [1, b_out_global]");
      }
      if (e.b_in >= 1 && e.b_in <= kMaxInputBits &&
          e.s_in_edge != step_for_bits(lq.grid_max - lq.grid_min, e.b_in)) {
        v.push_back(where + ": s_in_edge is not the b_in lattice step");
      }
      if (j < n_out && lq.s_out[j] > 0.0 && std::isfinite(e.phi_min) &&
          e.delta != round_half_up_to_int(e.phi_min / lq.s_out[j])) {
        v.push_back(where + ": delta is not round(phi_min / s_out)");
      }
      if (!std::isfinite(e.phi_min) || !std::isfinite(e.phi_max) ||
          e.phi_max < e.phi_min) {
        v.push_back(where + ": bad phi range");
      }
      if (e.alpha.n_sig < 1 || e.alpha.n_sig > 62 ||
          e.alpha.mantissa < (std::uint64_t{1} << (e.alpha.n_sig - 1)) ||
          e.alpha.mantissa > max_code(e.alpha.n_sig)) {
        v.push_back(where + ": alpha mantissa does not have n_sig bits");
      }
    }
  }
  return v;
}

std::vector<std::string> validate_plan(const QuantPlan& plan,
                                       const KanModel& model) {
  std::vector<std::string> v = validate_plan(plan);
  if (!v.empty()) return v;
  if (plan.layers.size() != model.layers.size()) {
    v.push_back("plan and model have different layer counts");
    return v;
  }
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const KanLayer& ml = model.layers[l];
    if (plan.n_out(l) != ml.n_out || plan.n_in(l) != ml.n_in) {
      v.push_back(fmt::format("plan layer {}: shape differs from model", l));
    }
    if (plan.layers[l].grid_min != ml.grid.grid_min ||
        plan.layers[l].grid_max != ml.grid.grid_max) {
      v.push_back(fmt::format("plan layer {}: grid differs from model", l));
    }
  }
  return v;
}

std::string serialize_plan(const QuantPlan& plan) {
  json root;
  root["format_version"] = 1;
  root["metadata"] = {
      {"metric", std::string(metric_kind_name(plan.meta.metric))},
      {"threshold",
       std::isfinite(plan.meta.threshold) ? json(plan.meta.threshold)
                                          : json("inf")},
      {"metric_value", plan.meta.metric_value},
      {"calibration_digest", plan.meta.calibration_digest},
      {"stage", plan.meta.stage},
      {"seed", plan.meta.seed},
      {"lattice", kLatticeRule},
      {"rounding", "half-up"}};
  root["n_sig"] = plan.n_sig;
  json layers = json::array();
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const LayerQuant& lq = plan.layers[l];
    json edges = json::array();
    for (const EdgeQuant& e : plan.edges[l]) {
      edges.push_back({{"i", e.source},
                       {"j", e.target},
                       {"b_in", e.b_in},
                       {"b_out", e.b_out},
                       {"s_in_edge", e.s_in_edge},
                       {"phi_min", e.phi_min},
                       {"phi_max", e.phi_max},
                       {"delta", e.delta},
                       {"alpha_mantissa", e.alpha.mantissa},
                       {"alpha_fraction_bits", e.alpha.fraction_bits},
                       {"alpha_n_sig", e.alpha.n_sig},
                       {"bias", e.bias}});
    }
    layers.push_back({{"b_in_global", lq.b_in_global},
                      {"b_out_global", lq.b_out_global},
                      {"grid_min", lq.grid_min},
                      {"grid_max", lq.grid_max},
                      {"s_in", lq.s_in},
                      {"s_out", lq.s_out},
                      {"edges", std::move(edges)}});
  }
  root["layers"] = std::move(layers);
  return root.dump(1) + "\n";
}

QuantPlan parse_plan(const std::string& text) {
  QuantPlan plan;
  try {
    const json root = json::parse(text);
    if (root.at("format_version").get<int>() != 1) {
      throw ValidationError({"plan: unsupported format_version"});
    }
    const json& meta = root.at("metadata");
    plan.meta.metric = parse_metric_kind(meta.at("metric").get<std::string>());
    const json& thr = meta.at("threshold");
    plan.meta.threshold = thr.is_string() ? INFINITY : thr.get<double>();
    plan.meta.metric_value = meta.at("metric_value").get<double>();
    plan.meta.calibration_digest = meta.at("calibration_digest").get<std::string>();
    plan.meta.stage = meta.at("stage").get<std::string>();
    plan.meta.seed = meta.at("seed").get<std::uint64_t>();
    plan.n_sig = root.at("n_sig").get<int>();
    int l = 0;
    for (const json& jl : root.at("layers")) {
      LayerQuant lq;
      lq.b_in_global = jl.at("b_in_global").get<int>();
      lq.b_out_global = jl.at("b_out_global").get<int>();
      lq.grid_min = jl.at("grid_min").get<double>();
      lq.grid_max = jl.at("grid_max").get<double>();
      lq.s_in = jl.at("s_in").get<double>();
      lq.s_out = jl.at("s_out").get<std::vector<double>>();
      std::vector<EdgeQuant> edges;
      for (const json& je : jl.at("edges")) {
        EdgeQuant e;
        e.layer = l;
        e.source = je.at("i").get<int>();
        e.target = je.at("j").get<int>();
        e.b_in = je.at("b_in").get<int>();
        e.b_out = je.at("b_out").get<int>();
        e.s_in_edge = je.at("s_in_edge").get<double>();
        e.phi_min = je.at("phi_min").get<double>();
        e.phi_max = je.at("phi_max").get<double>();
        e.delta = je.at("delta").get<std::int64_t>();
        e.alpha.mantissa = je.at("alpha_mantissa").get<std::uint64_t>();
        e.alpha.fraction_bits = je.at("alpha_fraction_bits").get<int>();
        e.alpha.n_sig = je.at("alpha_n_sig").get<int>();
        e.bias = je.at("bias").get<std::int64_t>();
        edges.push_back(e);
      }
      plan.layers.push_back(std::move(lq));
      plan.edges.push_back(std::move(edges));
      ++l;
    }
  } catch (const json::exception& e) {
    throw ValidationError({std::string("plan: ") + e.what()});
  }
  auto v = validate_plan(plan);
  if (!v.empty()) throw ValidationError(std::move(v));
  return plan;
}

void save_plan(const QuantPlan& plan, const std::filesystem::path& path) {
  write_text_file(path, serialize_plan(plan));
}

QuantPlan load_plan(const std::filesystem::path& path) {
  return parse_plan(read_text_file(path));
}

}  // namespace kanlut
