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

// kanlut: calibrate, compile, estimate, simulate and evaluate LUT-based KAN
// accelerators.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kanlut/accelerator.h"
#include "kanlut/calibrate.h"
#include "kanlut/error.h"
#include "kanlut/eval.h"
#include "kanlut/io_util.h"
#include "kanlut/model_io.h"
#include "kanlut/plan.h"
#include "kanlut/resources.h"
#include "kanlut/simulator.h"

namespace fs = std::filesystem;
using namespace kanlut;

namespace {

enum ExitCode {
  kOk = 0,
  kOther = 1,
  kValidation = 2,
  kCalibrationFailed = 3,
  kMismatch = 4,
};

struct RunConfig {
  std::vector<std::string> models;
  std::vector<std::string> plans;
  std::vector<std::string> bundles;
  std::string calib;
  std::string dataset;
  std::string inputs;
  std::string idx_images;
  std::string idx_labels;
  std::vector<double> pixel_range = {0.0, 1.0};
  std::size_t limit = 0;
  std::string metric = "regression";
  double threshold = 1e-3;
  std::string in_bits_range = "2:24";
  std::string out_bits_range = "2:24";
  int alpha_bits_max = 24;
  std::string stages = "all";
  std::vector<int> lut_n = {4, 6};
  double clock_hz = 100e6;
  std::string out;
  bool trace = false;
  std::uint64_t seed = 0;
  std::string task = "model";
};

BitRange parse_range(const std::string& text, const char* what) {
  BitRange r;
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      r.min_bits = r.max_bits = std::stoi(text);
    } else {
      r.min_bits = std::stoi(text.substr(0, colon));
      r.max_bits = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw ValidationError({fmt::format("{} '{}' is not MIN:MAX", what, text)});
  }
  if (r.min_bits < 1 || r.max_bits > 24 || r.min_bits > r.max_bits) {
    throw ValidationError(
        {fmt::format("{} '{}' must satisfy 1 <= MIN <= MAX <= 24", what, text)});
  }
  return r;
}

PixelScaling pixel_scaling(const RunConfig& c) {
  if (c.pixel_range.size() != 2 || !(c.pixel_range[0] < c.pixel_range[1])) {
    throw ValidationError({"--pixel-range needs LO,HI with LO < HI"});
  }
  return {c.pixel_range[0], c.pixel_range[1]};
}

// CSV (inputs then targets) or an IDX image/label pair.
Dataset load_data(const RunConfig& c, const std::string& csv, int n_in,
                  int n_out, std::string* scaling) {
  const MetricKind kind = parse_metric_kind(c.metric);
  if (!c.idx_images.empty() || !c.idx_labels.empty()) {
    if (c.idx_images.empty() || c.idx_labels.empty()) {
      throw ValidationError({"--idx-images and --idx-labels go together"});
    }
    const PixelScaling s = pixel_scaling(c);
    if (scaling) {
      *scaling = fmt::format("idx bytes 0..255 mapped linearly to [{}, {}]",
                             format_double(s.lo), format_double(s.hi));
    }
    Dataset d = load_idx_dataset(c.idx_images, c.idx_labels, s, c.limit);
    if (static_cast<int>(d.inputs.cols) != n_in) {
      throw ValidationError({fmt::format("IDX images have {} pixels, model "
                                         "expects {} inputs",
                                         d.inputs.cols, n_in)});
    }
    d.num_classes = n_out;
    return d;
  }
  if (csv.empty()) throw ValidationError({"no dataset given"});
  if (scaling) *scaling = "none";
  Dataset d = load_csv_dataset(csv, n_in, n_out, kind);
  if (c.limit > 0 && c.limit < d.size()) {
    d.inputs.rows = d.targets.rows = c.limit;
    d.inputs.data.resize(c.limit * d.inputs.cols);
    d.targets.data.resize(c.limit * d.targets.cols);
  }
  return d;
}

const std::string& single(const std::vector<std::string>& v, const char* flag) {
  if (v.size() != 1) {
    throw ValidationError({fmt::format("{} takes exactly one path here", flag)});
  }
  return v.front();
}

// Re-feedable with --config: the active subcommand's section only.
void write_snapshot(const CLI::App& sub, const fs::path& out) {
  write_text_file(out / "effective_config.ini",
                  fmt::format("[{}]\n{}", sub.get_name(),
                              sub.config_to_str(true, false)));
}

int cmd_calibrate(const RunConfig& c, const CLI::App& app) {
  const KanModel model = load_model(single(c.models, "--model"));
  const Dataset data = load_data(c, c.calib, model.num_inputs(),
                                 model.num_outputs(), nullptr);
  CalibrationOptions opt;
  opt.budget = {parse_metric_kind(c.metric), c.threshold};
  opt.in_bits = parse_range(c.in_bits_range, "--in-bits-range");
  opt.out_bits = parse_range(c.out_bits_range, "--out-bits-range");
  opt.alpha_bits_max = c.alpha_bits_max;
  opt.seed = c.seed;
  CalibrationContext ctx(model, data, opt);
  QuantPlan plan;
  if (c.stages == "global") {
    plan = calibrate_global(ctx);
  } else if (c.stages == "all") {
    plan = calibrate(ctx);
  } else {
    throw ValidationError({"--stages must be 'all' or 'global'"});
  }
  const fs::path out(c.out);
  save_plan(plan, out / "plan.json");
  const ResourceReport report = estimate_model(model, plan, c.lut_n);
  const std::string table = render_resource_table(report, c.task);
  write_text_file(out / "resources.txt", table);
  write_text_file(out / "resources.json", resource_report_json(report));
  write_snapshot(app, out);
  fmt::print("{}", table);
  fmt::print("stage {}: metric {} (threshold {}), n_sig {}, {} evaluations\n",
             plan.meta.stage, format_double(plan.meta.metric_value),
             format_double(c.threshold), plan.n_sig, ctx.evaluations());
  return kOk;
}

int cmd_compile(const RunConfig& c, const CLI::App& app) {
  const KanModel model = load_model(single(c.models, "--model"));
  const QuantPlan plan = load_plan(single(c.plans, "--plan"));
  const CompiledAccelerator acc = compile_accelerator(model, plan);
  const fs::path out(c.out);
  emit_init_files(acc, out);
  write_snapshot(app, out);
  fmt::print("compiled {} edges into {}; pipeline {} cycles (estimate)\n",
             model.num_edges(), out.string(), cycle_count(acc));
  return kOk;
}

int cmd_estimate(const RunConfig& c, const CLI::App& app) {
  const KanModel model = load_model(single(c.models, "--model"));
  const QuantPlan plan = load_plan(single(c.plans, "--plan"));
  const ResourceReport report = estimate_model(model, plan, c.lut_n);
  const std::string table = render_resource_table(report, c.task);
  const fs::path out(c.out);
  write_text_file(out / "resources.txt", table);
  write_text_file(out / "resources.json", resource_report_json(report));
  write_snapshot(app, out);
  fmt::print("{}", table);
  return kOk;
}

int cmd_simulate(const RunConfig& c, const CLI::App& app) {
  const CompiledAccelerator acc = load_bundle(single(c.bundles, "--bundle"));
  const Matrix inputs = read_csv(c.inputs);
  if (static_cast<int>(inputs.cols) != acc.num_inputs()) {
    throw ValidationError({fmt::format("inputs have {} columns, accelerator "
                                       "expects {}",
                                       inputs.cols, acc.num_inputs())});
  }
  std::vector<SimTrace> traces;
  const Matrix outputs = run_batch(acc, inputs, c.trace ? &traces : nullptr);
  const fs::path out(c.out);
  write_text_file(out / "outputs.csv", format_csv(outputs));
  if (c.trace) {
    std::string text;
    for (std::size_t r = 0; r < traces.size(); ++r) {
      text += format_trace(traces[r], static_cast<long>(r));
    }
    write_text_file(out / "trace.txt", text);
  }
  write_snapshot(app, out);
  fmt::print("simulated {} rows; {} cycles, {:.3g} s latency at {:.6g} Hz "
             "(estimate)\n",
             outputs.rows, cycle_count(acc), latency_at(acc, c.clock_hz),
             c.clock_hz);
  return kOk;
}

int cmd_eval(const RunConfig& c, const CLI::App& app) {
  if (c.models.empty() || c.models.size() != c.plans.size() ||
      c.models.size() != c.bundles.size()) {
    throw ValidationError(
        {"eval needs one --plan and one --bundle per --model"});
  }
  std::vector<KanModel> models;
  std::vector<QuantPlan> plans;
  std::vector<CompiledAccelerator> accs;
  int n_out = 0;
  for (std::size_t k = 0; k < c.models.size(); ++k) {
    models.push_back(load_model(c.models[k]));
    plans.push_back(load_plan(c.plans[k]));
    accs.push_back(load_bundle(c.bundles[k]));
    n_out += models.back().num_outputs();
  }
  std::string scaling;
  const Dataset data =
      load_data(c, c.dataset, models.front().num_inputs(), n_out, &scaling);
  std::vector<EvalComponent> parts;
  for (std::size_t k = 0; k < models.size(); ++k) {
    parts.push_back({&models[k], &plans[k], &accs[k]});
  }
  const EvalReport report = compare(parts, data, scaling);
  const fs::path out(c.out);
  write_text_file(out / "eval.json", eval_report_json(report));
  const std::string text = render_eval(report);
  write_text_file(out / "eval.txt", text);
  write_snapshot(app, out);
  fmt::print("{}", text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile Kolmogorov-Arnold networks into lookup-table "
               "accelerators"};
  app.set_config("--config", "", "INI/TOML file; command-line flags override");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  RunConfig c;

  const auto common = [&c](CLI::App* s) {
    s->add_option("--out", c.out, "Output directory")->required();
    s->add_option("--seed", c.seed, "Recorded in every output");
    s->add_option("--task", c.task, "Task label for reports");
  };
  const auto data_flags = [&c](CLI::App* s) {
    s->add_option("--metric", c.metric, "regression | classification");
    s->add_option("--idx-images", c.idx_images, "IDX image file");
    s->add_option("--idx-labels", c.idx_labels, "IDX label file");
    s->add_option("--pixel-range", c.pixel_range, "LO,HI for IDX pixels")
        ->delimiter(',')
        ->expected(2);
    s->add_option("--limit", c.limit, "Use only the first N rows");
  };

  CLI::App* cal = app.add_subcommand("calibrate", "Search a quantization plan");
  common(cal);
  data_flags(cal);
  cal->add_option("--model", c.models, "Model file")->required()->expected(1);
  cal->add_option("--calib", c.calib, "Calibration CSV");
  cal->add_option("--threshold", c.threshold, "Allowed degradation");
  cal->add_option("--in-bits-range", c.in_bits_range, "MIN:MAX input bits");
  cal->add_option("--out-bits-range", c.out_bits_range, "MIN:MAX output bits");
  cal->add_option("--alpha-bits-max", c.alpha_bits_max,
                  "Largest fixed-point mantissa width");
  cal->add_option("--stages", c.stages, "all | global");
  cal->add_option("--lut-n", c.lut_n, "LUT sizes to report")->delimiter(',');

  CLI::App* comp = app.add_subcommand("compile", "Tabulate edges and emit .mem");
  common(comp);
  comp->add_option("--model", c.models, "Model file")->required()->expected(1);
  comp->add_option("--plan", c.plans, "Plan file")->required()->expected(1);

  CLI::App* est = app.add_subcommand("estimate", "Report LUT resources");
  common(est);
  est->add_option("--model", c.models, "Model file")->required()->expected(1);
  est->add_option("--plan", c.plans, "Plan file")->required()->expected(1);
  est->add_option("--lut-n", c.lut_n, "LUT sizes to report")->delimiter(',');

  CLI::App* sim = app.add_subcommand("simulate", "Run the bit-exact simulator");
  common(sim);
  sim->add_option("--bundle", c.bundles, "Compiled bundle directory")
      ->required()
      ->expected(1);
  sim->add_option("--inputs", c.inputs, "CSV of input rows")->required();
  sim->add_flag("--trace", c.trace, "Write per-stage integer trace");
  sim->add_option("--clock-hz", c.clock_hz, "Clock for latency estimates");

  CLI::App* ev = app.add_subcommand("eval", "Score all three paths");
  common(ev);
  data_flags(ev);
  ev->add_option("--model", c.models, "Model file (repeat for joint tasks)")
      ->required();
  ev->add_option("--plan", c.plans, "Plan file, one per model")->required();
  ev->add_option("--bundle", c.bundles, "Bundle directory, one per model")
      ->required();
  ev->add_option("--dataset", c.dataset, "Dataset CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*cal) return cmd_calibrate(c, *cal);
    if (*comp) return cmd_compile(c, *comp);
    if (*est) return cmd_estimate(c, *est);
    if (*sim) return cmd_simulate(c, *sim);
    if (*ev) return cmd_eval(c, *ev);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const StructuralError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration failed: " << e.what() << "\n";
    return kCalibrationFailed;
  } catch (const MismatchError& e) {
    std::cerr << "bit-exact mismatch: " << e.what() << "\n";
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
