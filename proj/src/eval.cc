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

#include "kanlut/eval.h"

#include <chrono>

#include <fmt/format.h>
#include <json.hpp>

#include "kanlut/error.h"
#include "kanlut/metrics.h"
#include "kanlut/reference.h"
#include "kanlut/simulator.h"

namespace kanlut {
namespace {

void check_stages(const std::vector<LayerStages>& ref, const SimTrace& sim,
                  long row) {
  for (std::size_t l = 0; l < ref.size(); ++l) {
    const LayerStages& a = ref[l];
    const LayerStages& b = sim.layers.at(l);
    const auto first_diff = [](const auto& x, const auto& y) -> int {
      if (x.size() != y.size()) return 0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] != y[k]) return static_cast<int>(k);
      }
      return -1;
    };
    const int li = static_cast<int>(l);
    if (int k = first_diff(a.quant, b.quant); k >= 0) {
      throw MismatchError("quant", li, k, row);
    }
    if (int k = first_diff(a.lookup, b.lookup); k >= 0) {
      throw MismatchError("lookup", li, k, row);
    }
    if (int k = first_diff(a.accum, b.accum); k >= 0) {
      throw MismatchError("accum", li, k, row);
    }
  }
}

PathMetrics score(const Matrix& pred, const Dataset& data) {
  PathMetrics m;
  if (data.kind == MetricKind::kClassification) {
    m.accuracy = accuracy(pred, data);
    return m;
  }
  m.rmse = rmse(pred.data, data.targets.data);
  const double scale = rms(data.targets.data);
  m.relative_rmse = scale > 0.0 ? m.rmse / scale : m.rmse;
  for (std::size_t c = 0; c < pred.cols; ++c) {
    std::vector<double> p(pred.rows), t(pred.rows);
    for (std::size_t r = 0; r < pred.rows; ++r) {
      p[r] = pred.at(r, c);
      t[r] = data.targets.at(r, c);
    }
    m.column_rmse.push_back(rmse(p, t));
  }
  return m;
}

nlohmann::ordered_json path_json(const PathMetrics& m, MetricKind kind) {
  nlohmann::ordered_json j;
  if (kind == MetricKind::kClassification) {
    j["accuracy"] = m.accuracy;
  } else {
    j["rmse"] = m.rmse;
    j["relative_rmse"] = m.relative_rmse;
    j["column_rmse"] = m.column_rmse;
  }
  return j;
}

}  // namespace

EvalReport compare(const std::vector<EvalComponent>& components,
                   const Dataset& data, std::string input_scaling) {
  const auto start = std::chrono::steady_clock::now();
  if (components.empty()) throw StructuralError("nothing to evaluate");
  auto violations = validate_dataset(data);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  if (data.kind == MetricKind::kClassification && components.size() != 1) {
    throw StructuralError("classification takes a single model");
  }
  int total_out = 0;
  for (const EvalComponent& c : components) {
    KANLUT_CHECK(c.model && c.plan && c.accelerator, "incomplete component");
    if (c.model->num_inputs() != static_cast<int>(data.inputs.cols) ||
        c.accelerator->num_inputs() != c.model->num_inputs()) {
      throw StructuralError(fmt::format(
          "dataset has {} inputs, model expects {}", data.inputs.cols,
          c.model->num_inputs()));
    }
    if (c.accelerator->num_outputs() != c.model->num_outputs()) {
      throw StructuralError("accelerator does not match the model outputs");
    }
    total_out += c.model->num_outputs();
  }
  if (data.kind == MetricKind::kRegression &&
      static_cast<int>(data.targets.cols) != total_out) {
    throw StructuralError(fmt::format("dataset has {} targets, models give {}",
                                      data.targets.cols, total_out));
  }

  Matrix f, q, s;
  for (Matrix* m : {&f, &q, &s}) {
    m->rows = data.size();
    m->cols = static_cast<std::size_t>(total_out);
    m->data.assign(m->rows * m->cols, 0.0);
  }
  EvalReport report;
  int col = 0;
  for (const EvalComponent& c : components) {
    const QuantizedReference ref(*c.model, *c.plan);
    std::vector<LayerStages> stages;
    for (std::size_t r = 0; r < data.size(); ++r) {
      const std::span<const double> x(data.inputs.row(r), data.inputs.cols);
      const auto yf = forward_float(*c.model, x);
      const auto yq = ref.infer(x, &stages);
      const SimResult ys = run_model(*c.accelerator, x);
      check_stages(stages, ys.trace, static_cast<long>(r));
      for (std::size_t k = 0; k < yf.size(); ++k) {
        if (yq[k] != ys.outputs[k]) {
          throw MismatchError("output", static_cast<int>(stages.size()) - 1,
                              static_cast<int>(k), static_cast<long>(r));
        }
        f.data[r * f.cols + col + k] = yf[k];
        q.data[r * q.cols + col + k] = yq[k];
        s.data[r * s.cols + col + k] = ys.outputs[k];
      }
    }
    report.cycles.push_back(cycle_count(*c.accelerator));
    col += c.model->num_outputs();
  }

  report.kind = data.kind;
  report.samples = data.size();
  report.components = static_cast<int>(components.size());
  report.float_path = score(f, data);
  report.quantized = score(q, data);
  report.simulated = score(s, data);
  report.degradation = degradation(f, q, data);
  if (data.kind == MetricKind::kRegression) {
    const double scale = rms(f.data);
    const double d = rmse(q.data, f.data);
    report.rmse_vs_float = scale > 0.0 ? d / scale : d;
  }
  report.input_scaling = std::move(input_scaling);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

EvalReport compare(const KanModel& model, const QuantPlan& plan,
                   const CompiledAccelerator& acc, const Dataset& data) {
  return compare({EvalComponent{&model, &plan, &acc}}, data);
}

std::string render_eval(const EvalReport& r) {
  std::string out;
  auto add = [&out](std::string_view k, const std::string& v) {
    fmt::format_to(std::back_inserter(out), "{:<22}{}\n", k, v);
  };
  add("samples", std::to_string(r.samples));
  add("models", std::to_string(r.components));
  add("metric", std::string(metric_kind_name(r.kind)));
  if (r.kind == MetricKind::kClassification) {
    add("float accuracy", fmt::format("{:.4f}", r.float_path.accuracy));
    add("quantized accuracy", fmt::format("{:.4f}", r.quantized.accuracy));
    add("simulated accuracy", fmt::format("{:.4f}", r.simulated.accuracy));
    add("accuracy drop", fmt::format("{:.4f}", r.degradation));
  } else {
    add("float rmse", fmt::format("{:.6e}", r.float_path.rmse));
    add("quantized rmse", fmt::format("{:.6e}", r.quantized.rmse));
    add("simulated rmse", fmt::format("{:.6e}", r.simulated.rmse));
    add("relative degradation", fmt::format("{:.6e}", r.degradation));
    add("rel. rmse vs float", fmt::format("{:.6e}", r.rmse_vs_float));
  }
  std::string cycles;
  for (std::uint64_t c : r.cycles) {
    cycles += (cycles.empty() ? "" : ", ") + std::to_string(c);
  }
  add("pipeline cycles", cycles + " (estimate)");
  add("input scaling", r.input_scaling);
  add("bit-exact", "yes");
  add("runtime", fmt::format("{:.3f} s", r.runtime_seconds));
  return out;
}

std::string eval_report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["metric"] = std::string(metric_kind_name(r.kind));
  j["samples"] = r.samples;
  j["models"] = r.components;
  j["float"] = path_json(r.float_path, r.kind);
  j["quantized"] = path_json(r.quantized, r.kind);
  j["simulated"] = path_json(r.simulated, r.kind);
  j["degradation"] = r.degradation;
  if (r.kind == MetricKind::kRegression) j["rmse_vs_float"] = r.rmse_vs_float;
  j["cycles"] = r.cycles;
  j["input_scaling"] = r.input_scaling;
  j["bit_exact"] = true;
  return j.dump(1) + "\n";
}

}  // namespace kanlut
