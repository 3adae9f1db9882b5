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

#include "kanlut/accelerator.h"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "kanlut/error.h"
#include "kanlut/io_util.h"
#include "kanlut/mem_file.h"

namespace kanlut {
namespace {

using nlohmann::ordered_json;

// Consuming-edge register widths for a source accumulator in [0, a_max].
void size_quant_block(CompiledEdge& e, std::uint64_t a_max) {
  const __int128 lo = e.bias;
  const __int128 hi = static_cast<__int128>(a_max) + e.bias;
  const __int128 m = static_cast<__int128>(e.scale.mantissa);
  e.biased_bits = signed_bits(lo, hi);
  e.product_bits = signed_bits(std::min(lo * m, hi * m), std::max(lo * m, hi * m));
}

std::vector<std::uint64_t> accum_max(const CompiledLayer& layer) {
  std::vector<std::uint64_t> a(layer.n_out, 0);
  for (int i = 0; i < layer.n_in; ++i) {
    for (int j = 0; j < layer.n_out; ++j) {
      a[j] += max_code(layer.edges[i * layer.n_out + j].table.b_out);
    }
  }
  return a;
}

void finish_widths(CompiledAccelerator& acc) {
  for (std::size_t l = 0; l < acc.layers.size(); ++l) {
    CompiledLayer& layer = acc.layers[l];
    const auto a = accum_max(layer);
    layer.accum_bits.resize(layer.n_out);
    for (int j = 0; j < layer.n_out; ++j) {
      layer.accum_bits[j] = std::max(1, bit_width(a[j]));
    }
    if (l == 0) continue;
    const auto prev = accum_max(acc.layers[l - 1]);
    for (int i = 0; i < layer.n_in; ++i) {
      for (int j = 0; j < layer.n_out; ++j) {
        size_quant_block(layer.edges[i * layer.n_out + j], prev[i]);
      }
    }
  }
}

template <typename T>
T field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw IoError(fmt::format("manifest lacks '{}'", key));
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("manifest field '{}': {}", key, e.what()));
  }
}

}  // namespace

CompiledAccelerator compile_accelerator(const KanModel& model,
                                        const QuantPlan& plan) {
  const auto tables = tabulate_model(model, plan);  // validates the plan
  CompiledAccelerator acc;
  acc.n_sig = plan.n_sig;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const KanLayer& ml = model.layers[l];
    CompiledLayer layer;
    layer.n_in = ml.n_in;
    layer.n_out = ml.n_out;
    layer.s_out = plan.layers[l].s_out;
    for (int i = 0; i < ml.n_in; ++i) {
      for (int j = 0; j < ml.n_out; ++j) {
        const EdgeQuant& q = plan.edge(static_cast<int>(l), i, j);
        CompiledEdge e;
        e.table = tables[l][i * ml.n_out + j];
        e.grid_min = plan.layers[l].grid_min;
        e.s_in_edge = q.s_in_edge;
        e.scale = q.alpha;
        e.bias = q.bias;
        layer.edges.push_back(std::move(e));
      }
    }
    acc.layers.push_back(std::move(layer));
  }
  const int last = static_cast<int>(plan.layers.size()) - 1;
  acc.output_offsets.assign(plan.n_out(last), 0.0);
  for (int j = 0; j < plan.n_out(last); ++j) {
    for (int i = 0; i < plan.n_in(last); ++i) {
      acc.output_offsets[j] += plan.edge(last, i, j).phi_min;
    }
  }
  finish_widths(acc);
  return acc;
}

std::string emit_init_files(const CompiledAccelerator& acc,
                            const std::filesystem::path& out_dir) {
  ordered_json m;
  m["format_version"] = kBundleFormatVersion;
  m["n_sig"] = acc.n_sig;
  m["output_offsets"] = acc.output_offsets;
  ordered_json layers = ordered_json::array();
  ordered_json edges = ordered_json::array();
  for (std::size_t l = 0; l < acc.layers.size(); ++l) {
    const CompiledLayer& layer = acc.layers[l];
    layers.push_back({{"n_in", layer.n_in},
                      {"n_out", layer.n_out},
                      {"s_out", layer.s_out},
                      {"accum_bits", layer.accum_bits}});
    for (const CompiledEdge& e : layer.edges) {
      const EdgeTable& t = e.table;
      const std::string file = mem_file_name(t.layer, t.source, t.target);
      write_text_file(out_dir / file, format_mem(t));
      edges.push_back({{"layer", t.layer},
                       {"source", t.source},
                       {"target", t.target},
                       {"file", file},
                       {"b_in", t.b_in},
                       {"b_out", t.b_out},
                       {"delta", t.delta},
                       {"grid_min", e.grid_min},
                       {"s_in_edge", e.s_in_edge},
                       {"alpha_mantissa", e.scale.mantissa},
                       {"alpha_fraction_bits", e.scale.fraction_bits},
                       {"alpha_n_sig", e.scale.n_sig},
                       {"bias", e.bias},
                       {"biased_bits", e.biased_bits},
                       {"product_bits", e.product_bits}});
    }
  }
  m["layers"] = layers;
  m["edges"] = edges;
  const std::string text = m.dump(1) + "\n";
  write_text_file(out_dir / "manifest.json", text);
  return text;
}

CompiledAccelerator load_bundle(const std::filesystem::path& dir) {
  ordered_json m;
  try {
    m = ordered_json::parse(read_text_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("{}: {}", (dir / "manifest.json").string(),
                              e.what()));
  }
  if (field<int>(m, "format_version") != kBundleFormatVersion) {
    throw IoError("unsupported bundle format version");
  }
  CompiledAccelerator acc;
  acc.n_sig = field<int>(m, "n_sig");
  acc.output_offsets = field<std::vector<double>>(m, "output_offsets");
  for (const auto& jl : field<ordered_json>(m, "layers")) {
    CompiledLayer layer;
    layer.n_in = field<int>(jl, "n_in");
    layer.n_out = field<int>(jl, "n_out");
    layer.s_out = field<std::vector<double>>(jl, "s_out");
    layer.accum_bits = field<std::vector<int>>(jl, "accum_bits");
    if (layer.n_in < 1 || layer.n_out < 1 ||
        layer.s_out.size() != static_cast<std::size_t>(layer.n_out) ||
        layer.accum_bits.size() != layer.s_out.size()) {
      throw IoError("manifest layer has inconsistent sizes");
    }
    layer.edges.resize(static_cast<std::size_t>(layer.n_in) * layer.n_out);
    acc.layers.push_back(std::move(layer));
  }
  if (acc.layers.empty()) throw IoError("manifest has no layers");
  if (acc.output_offsets.size() !=
      static_cast<std::size_t>(acc.layers.back().n_out)) {
    throw IoError("manifest output offsets do not match the last layer");
  }
  std::vector<std::vector<bool>> seen(acc.layers.size());
  for (std::size_t l = 0; l < acc.layers.size(); ++l) {
    seen[l].assign(acc.layers[l].edges.size(), false);
  }
  for (const auto& je : field<ordered_json>(m, "edges")) {
    const int l = field<int>(je, "layer");
    const int i = field<int>(je, "source");
    const int j = field<int>(je, "target");
    if (l < 0 || l >= static_cast<int>(acc.layers.size()) || i < 0 ||
        i >= acc.layers[l].n_in || j < 0 || j >= acc.layers[l].n_out) {
      throw IoError(fmt::format("manifest edge ({}, {}, {}) out of range", l,
                                i, j));
    }
    const std::size_t k = static_cast<std::size_t>(i) * acc.layers[l].n_out + j;
    if (seen[l][k]) {
      throw IoError(fmt::format("manifest edge ({}, {}, {}) repeated", l, i, j));
    }
    seen[l][k] = true;
    CompiledEdge& e = acc.layers[l].edges[k];
    e.table.layer = l;
    e.table.source = i;
    e.table.target = j;
    e.table.b_in = field<int>(je, "b_in");
    e.table.b_out = field<int>(je, "b_out");
    e.table.delta = field<std::int64_t>(je, "delta");
    e.table.codes = read_mem_file(dir / field<std::string>(je, "file"),
                                  e.table.b_in, e.table.b_out);
    e.grid_min = field<double>(je, "grid_min");
    e.s_in_edge = field<double>(je, "s_in_edge");
    e.scale.mantissa = field<std::uint64_t>(je, "alpha_mantissa");
    e.scale.fraction_bits = field<int>(je, "alpha_fraction_bits");
    e.scale.n_sig = field<int>(je, "alpha_n_sig");
    e.bias = field<std::int64_t>(je, "bias");
    e.biased_bits = field<int>(je, "biased_bits");
    e.product_bits = field<int>(je, "product_bits");
  }
  for (std::size_t l = 0; l < seen.size(); ++l) {
    if (std::find(seen[l].begin(), seen[l].end(), false) != seen[l].end()) {
      throw IoError(fmt::format("manifest misses edges of layer {}", l));
    }
  }
  for (std::size_t l = 1; l < acc.layers.size(); ++l) {
    if (acc.layers[l].n_in != acc.layers[l - 1].n_out) {
      throw IoError("manifest layer widths do not chain");
    }
  }
  // Recorded widths must be the ones this compiler would derive.
  CompiledAccelerator check = acc;
  finish_widths(check);
  if (!(check == acc)) throw IoError("manifest register widths are inconsistent");
  return acc;
}

}  // namespace kanlut
