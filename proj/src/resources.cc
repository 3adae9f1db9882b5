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

#include "kanlut/resources.h"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "kanlut/calibrate.h"
#include "kanlut/error.h"

namespace kanlut {
namespace {

std::string with_commas(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int k = 0; k < n; ++k) {
    if (k > 0 && (n - k) % 3 == 0) out += ',';
    out += digits[k];
  }
  return out;
}

struct Summary {
  int max = 0;
  double mean = 0.0;
};

Summary summarize(const std::vector<EdgeResources>& edges, bool inputs) {
  Summary s;
  if (edges.empty()) return s;
  long long sum = 0;
  for (const EdgeResources& e : edges) {
    const int b = inputs ? e.bits.b_in : e.bits.b_out;
    s.max = std::max(s.max, b);
    sum += b;
  }
  s.mean = static_cast<double>(sum) / static_cast<double>(edges.size());
  return s;
}

}  // namespace

VariantReport make_variant(std::string name, std::vector<EdgeBits> edges,
                           std::span<const int> lut_inputs,
                           const VariantReport* baseline, bool fine_inputs,
                           bool fine_outputs) {
  VariantReport v;
  v.name = std::move(name);
  v.total_theoretical.assign(lut_inputs.size(), LutCount{});
  int n_layers = 0;
  for (const EdgeBits& e : edges) n_layers = std::max(n_layers, e.layer + 1);
  v.layer_theoretical.assign(n_layers,
                             std::vector<LutCount>(lut_inputs.size()));
  v.layer_physical.assign(n_layers, 0);
  for (const EdgeBits& b : edges) {
    EdgeResources r;
    r.bits = b;
    for (std::size_t k = 0; k < lut_inputs.size(); ++k) {
      const LutCount c = count_luts_theoretical(b.b_in, b.b_out, lut_inputs[k]);
      r.theoretical.push_back(c);
      v.layer_theoretical[b.layer][k] += c;
      v.total_theoretical[k] += c;
    }
    r.physical_blocks = pool_layout(b.b_in, b.b_out).block_count;
    v.layer_physical[b.layer] += r.physical_blocks;
    v.total_physical += r.physical_blocks;
    v.edges.push_back(std::move(r));
  }
  const Summary in = summarize(v.edges, true);
  const Summary out = summarize(v.edges, false);
  v.in_bits_max = in.max;
  v.in_bits_mean = in.mean;
  v.fine_inputs = fine_inputs;
  v.out_bits_max = out.max;
  v.out_bits_mean = out.mean;
  v.fine_outputs = fine_outputs;
  v.savings_bp.assign(lut_inputs.size(), 0);
  if (baseline) {
    KANLUT_CHECK(baseline->total_theoretical.size() == lut_inputs.size(),
                 "baseline has different N values");
    for (std::size_t k = 0; k < lut_inputs.size(); ++k) {
      v.savings_bp[k] = savings_basis_points(v.total_theoretical[k],
                                             baseline->total_theoretical[k]);
    }
    v.physical_savings_bp =
        savings_basis_points(LutCount::integer(v.total_physical),
                             LutCount::integer(baseline->total_physical));
  }
  return v;
}

ResourceReport estimate_model(const KanModel& model, const QuantPlan& plan,
                              std::span<const int> lut_inputs) {
  auto violations = validate_plan(plan, model);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  if (lut_inputs.empty()) throw StructuralError("no LUT sizes requested");
  for (int n : lut_inputs) {
    if (n < 1 || n > 16) {
      throw StructuralError(fmt::format("LUT size {} outside [1, 16]", n));
    }
  }
  std::vector<EdgeBits> global, fine_out, fine_both;
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const LayerQuant& lq = plan.layers[l];
    const KanLayer& ml = model.layers[l];
    // Output widths trimmed on a given input lattice. A plan width below the
    // global one was already trimmed on the edge's own lattice.
    const auto trimmed = [&](const EdgeQuant& q, int b_in) {
      if (b_in == q.b_in && q.b_out < lq.b_out_global) return q.b_out;
      const LatticeStats st =
          lattice_stats(ml.edge(q.source, q.target), ml.grid, b_in);
      return trimmed_output_bits(st, lq.s_out[q.target], lq.b_out_global);
    };
    for (const EdgeQuant& q : plan.edges[l]) {
      global.push_back({q.layer, q.source, q.target, lq.b_in_global,
                        lq.b_out_global});
      fine_out.push_back({q.layer, q.source, q.target, lq.b_in_global,
                          trimmed(q, lq.b_in_global)});
      fine_both.push_back(
          {q.layer, q.source, q.target, q.b_in, trimmed(q, q.b_in)});
    }
  }
  ResourceReport r;
  r.lut_inputs.assign(lut_inputs.begin(), lut_inputs.end());
  r.variants.push_back(make_variant("global", std::move(global), lut_inputs,
                                    nullptr, false, false));
  r.variants.push_back(make_variant("fine-grained-outputs",
                                    std::move(fine_out), lut_inputs,
                                    &r.variants[0], false, true));
  r.variants.push_back(make_variant("fine-grained-both", std::move(fine_both),
                                    lut_inputs, &r.variants[0], true, true));
  return r;
}

std::string render_resource_table(const ResourceReport& report,
                                  const std::string& task) {
  std::vector<std::string> header = {"Task",    "Variant", "Out max",
                                     "Out mean", "In max", "In mean"};
  for (int n : report.lut_inputs) header.push_back(fmt::format("LUT-{}s", n));
  header.push_back("Blocks");
  header.push_back("Savings");

  std::vector<std::vector<std::string>> rows;
  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    const VariantReport& r = report.variants[v];
    std::vector<std::string> row = {
        task,
        r.name,
        std::to_string(r.out_bits_max),
        r.fine_outputs ? fmt::format("{:.2f}", r.out_bits_mean) : "-",
        std::to_string(r.in_bits_max),
        r.fine_inputs ? fmt::format("{:.2f}", r.in_bits_mean) : "-"};
    for (const LutCount& c : r.total_theoretical) {
      row.push_back(with_commas(c.round_half_up()));
    }
    row.push_back(with_commas(r.total_physical));
    row.push_back(v == 0 || r.savings_bp.empty()
                      ? "Baseline"
                      : format_basis_points(r.savings_bp[0]));
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  // First two columns left-aligned, numbers right-aligned.
  const auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += "  ";
      out += c < 2 ? fmt::format("{:<{}}", cells[c], width[c])
                   : fmt::format("{:>{}}", cells[c], width[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string text = line(header);
  for (const auto& row : rows) text += line(row);
  return text;
}

std::string resource_report_json(const ResourceReport& report) {
  using nlohmann::ordered_json;
  const auto counts = [](const std::vector<LutCount>& cs) {
    ordered_json a = ordered_json::array();
    for (const LutCount& c : cs) a.push_back(c.exact());
    return a;
  };
  ordered_json j;
  j["lut_inputs"] = report.lut_inputs;
  ordered_json variants = ordered_json::array();
  for (const VariantReport& v : report.variants) {
    ordered_json jv;
    jv["name"] = v.name;
    jv["output_bits"] = {{"max", v.out_bits_max},
                         {"mean", v.out_bits_mean},
                         {"per_edge", v.fine_outputs}};
    jv["input_bits"] = {{"max", v.in_bits_max},
                        {"mean", v.in_bits_mean},
                        {"per_edge", v.fine_inputs}};
    jv["theoretical_total"] = counts(v.total_theoretical);
    jv["physical_blocks_total"] = v.total_physical;
    ordered_json sv = ordered_json::array();
    for (std::int64_t bp : v.savings_bp) sv.push_back(format_basis_points(bp));
    jv["savings"] = sv;
    jv["physical_savings"] = format_basis_points(v.physical_savings_bp);
    ordered_json layers = ordered_json::array();
    for (std::size_t l = 0; l < v.layer_theoretical.size(); ++l) {
      layers.push_back({{"layer", l},
                        {"theoretical", counts(v.layer_theoretical[l])},
                        {"physical_blocks", v.layer_physical[l]}});
    }
    jv["layers"] = layers;
    ordered_json edges = ordered_json::array();
    for (const EdgeResources& e : v.edges) {
      edges.push_back({{"layer", e.bits.layer},
                       {"source", e.bits.source},
                       {"target", e.bits.target},
                       {"b_in", e.bits.b_in},
                       {"b_out", e.bits.b_out},
                       {"theoretical", counts(e.theoretical)},
                       {"physical_blocks", e.physical_blocks}});
    }
    jv["edges"] = edges;
    variants.push_back(jv);
  }
  j["variants"] = variants;
  return j.dump(1) + "\n";
}

}  // namespace kanlut
