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

#include "kanlut/model_io.h"

#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "kanlut/error.h"
#include "kanlut/io_util.h"

namespace kanlut {
namespace {

using nlohmann::json;

class Reader {
 public:
  std::vector<std::string> errors;

  void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                      const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) {
        errors.push_back(fmt::format("{}: unknown key '{}'", where, it.key()));
      }
    }
  }

  const json* field(const json& obj, const char* key,
                    const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      errors.push_back(fmt::format("{}: missing key '{}'", where, key));
      return nullptr;
    }
    return &*it;
  }

  bool get_int(const json& obj, const char* key, const std::string& where,
               int& out) {
    const json* f = field(obj, key, where);
    if (!f) return false;
    if (!f->is_number_integer()) {
      errors.push_back(fmt::format("{}: '{}' must be an integer", where, key));
      return false;
    }
    out = f->get<int>();
    return true;
  }

  bool get_real(const json& obj, const char* key, const std::string& where,
                double& out) {
    const json* f = field(obj, key, where);
    if (!f) return false;
    if (!f->is_number()) {
      errors.push_back(fmt::format("{}: '{}' must be a number", where, key));
      return false;
    }
    out = f->get<double>();
    return true;
  }
};

}  // namespace

KanModel parse_model(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError({std::string("malformed JSON: ") + e.what()});
  }
  Reader rd;
  if (!root.is_object()) throw ValidationError({"top level must be an object"});
  rd.reject_unknown(root, {"format_version", "layers"}, "model");
  int version = 0;
  if (rd.get_int(root, "format_version", "model", version) &&
      version != kModelFormatVersion) {
    rd.errors.push_back(
        fmt::format("model: unsupported format_version {}", version));
  }
  KanModel model;
  const json* layers = rd.field(root, "layers", "model");
  if (layers && !layers->is_array()) {
    rd.errors.push_back("model: 'layers' must be an array");
    layers = nullptr;
  }
  if (layers) {
    for (std::size_t l = 0; l < layers->size(); ++l) {
      const json& jl = (*layers)[l];
      const std::string where = fmt::format("layer {}", l);
      KanLayer layer;
      if (!jl.is_object()) {
        rd.errors.push_back(where + ": must be an object");
        model.layers.push_back(layer);
        continue;
      }
      rd.reject_unknown(jl,
                        {"n_in", "n_out", "grid_min", "grid_max", "grid_size",
                         "spline_order", "edges"},
                        where);
      bool ok = rd.get_int(jl, "n_in", where, layer.n_in);
      ok &= rd.get_int(jl, "n_out", where, layer.n_out);
      rd.get_real(jl, "grid_min", where, layer.grid.grid_min);
      rd.get_real(jl, "grid_max", where, layer.grid.grid_max);
      ok &= rd.get_int(jl, "grid_size", where, layer.grid.intervals);
      ok &= rd.get_int(jl, "spline_order", where, layer.grid.order);
      ok = ok && layer.n_in > 0 && layer.n_out > 0 && layer.n_in <= 1 << 20 &&
           layer.n_out <= 1 << 20;
      const json* edges = rd.field(jl, "edges", where);
      if (edges && !edges->is_array()) {
        rd.errors.push_back(where + ": 'edges' must be an array");
        edges = nullptr;
      }
      if (ok) {
        layer.edges.resize(static_cast<std::size_t>(layer.n_in) * layer.n_out);
      }
      std::vector<bool> seen(layer.edges.size(), false);
      if (edges) {
        for (std::size_t e = 0; e < edges->size(); ++e) {
          const json& je = (*edges)[e];
          std::string ew = fmt::format("{} edge #{}", where, e);
          if (!je.is_object()) {
            rd.errors.push_back(ew + ": must be an object");
            continue;
          }
          Edge edge;
          bool eok = rd.get_int(je, "i", ew, edge.source);
          eok &= rd.get_int(je, "j", ew, edge.target);
          if (eok) ew = fmt::format("{} edge ({}, {})", where, edge.source,
                                    edge.target);
          rd.reject_unknown(je, {"i", "j", "w_b", "w_s", "coeffs"}, ew);
          rd.get_real(je, "w_b", ew, edge.w_b);
          rd.get_real(je, "w_s", ew, edge.w_s);
          if (const json* c = rd.field(je, "coeffs", ew)) {
            if (!c->is_array()) {
              rd.errors.push_back(ew + ": 'coeffs' must be an array");
            } else {
              for (const json& v : *c) {
                if (!v.is_number()) {
                  rd.errors.push_back(ew + ": coeffs must be numbers");
                  break;
                }
                edge.coeffs.push_back(v.get<double>());
              }
            }
          }
          if (!eok || !ok) continue;
          if (edge.source < 0 || edge.source >= layer.n_in ||
              edge.target < 0 || edge.target >= layer.n_out) {
            rd.errors.push_back(ew + ": index out of range");
            continue;
          }
          const std::size_t slot =
              static_cast<std::size_t>(edge.source) * layer.n_out +
              edge.target;
          if (seen[slot]) {
            rd.errors.push_back(ew + ": duplicate edge");
            continue;
          }
          seen[slot] = true;
          layer.edges[slot] = std::move(edge);
        }
      }
      for (std::size_t s = 0; s < seen.size(); ++s) {
        if (!seen[s]) {
          rd.errors.push_back(fmt::format("{} edge ({}, {}): missing", where,
                                          s / layer.n_out, s % layer.n_out));
        }
      }
      model.layers.push_back(std::move(layer));
    }
  }
  if (rd.errors.empty()) {
    auto structural = validate_model(model);
    rd.errors.insert(rd.errors.end(), structural.begin(), structural.end());
  }
  if (!rd.errors.empty()) throw ValidationError(std::move(rd.errors));
  return model;
}

KanModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path));
}

std::string serialize_model(const KanModel& model) {
  json root;
  root["format_version"] = kModelFormatVersion;
  json layers = json::array();
  for (const auto& layer : model.layers) {
    json jl;
    jl["n_in"] = layer.n_in;
    jl["n_out"] = layer.n_out;
    jl["grid_min"] = layer.grid.grid_min;
    jl["grid_max"] = layer.grid.grid_max;
    jl["grid_size"] = layer.grid.intervals;
    jl["spline_order"] = layer.grid.order;
    json edges = json::array();
    for (const auto& e : layer.edges) {
      edges.push_back({{"i", e.source},
                       {"j", e.target},
                       {"w_b", e.w_b},
                       {"w_s", e.w_s},
                       {"coeffs", e.coeffs}});
    }
    jl["edges"] = std::move(edges);
    layers.push_back(std::move(jl));
  }
  root["layers"] = std::move(layers);
  return root.dump(1) + "\n";
}

void save_model(const KanModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

}  // namespace kanlut
