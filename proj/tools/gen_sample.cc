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

// Writes the bundled sample: a random (2,5,1) model, calibration and input
// CSVs, a run configuration and a global 16-in / 22-out plan.
//
//   gen_sample OUT_DIR

#include <cstdio>
#include <filesystem>
#include <vector>

#include <fmt/format.h>

#include "kanlut/calibrate.h"
#include "kanlut/io_util.h"
#include "kanlut/model_io.h"
#include "kanlut/plan.h"
#include "kanlut/synthetic.h"

using namespace kanlut;

namespace {

constexpr std::uint64_t kModelSeed = 2025;
constexpr std::uint64_t kCalibSeed = 11;
constexpr std::uint64_t kInputSeed = 12;

Matrix join(const Dataset& d) {
  Matrix m;
  m.rows = d.size();
  m.cols = d.inputs.cols + d.targets.cols;
  for (std::size_t r = 0; r < m.rows; ++r) {
    m.data.insert(m.data.end(), d.inputs.row(r), d.inputs.row(r) + d.inputs.cols);
    m.data.insert(m.data.end(), d.targets.row(r),
                  d.targets.row(r) + d.targets.cols);
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: gen_sample OUT_DIR\n");
    return 2;
  }
  const std::filesystem::path out(argv[1]);
  const KanModel model = random_model({2, 5, 1}, kModelSeed);
  save_model(model, out / "model.json");

  const Dataset calib = synthetic_regression(model, 500, 1e-4, kCalibSeed);
  write_text_file(out / "calib.csv", "x0,x1,y\n" + format_csv(join(calib)));

  const Dataset probe = synthetic_regression(model, 64, 0.0, kInputSeed);
  write_text_file(out / "inputs.csv", "x0,x1\n" + format_csv(probe.inputs));

  CalibrationOptions opt;
  opt.budget = {MetricKind::kRegression, 1e-3};
  CalibrationContext ctx(model, calib, opt);
  const std::vector<int> b_in = {16, 16};
  const std::vector<int> b_out = {22, 22};
  QuantPlan plan = make_global_plan(ctx, b_in, b_out, 24);
  plan.meta.metric_value = ctx.metric(plan);
  plan.meta.threshold = opt.budget.threshold;
  plan.meta.calibration_digest = dataset_digest(calib);
  save_plan(plan, out / "plan_global.json");

  write_text_file(out / "config.ini",
                  "; Sample run configuration. Paths are relative to the "
                  "repository root.\n"
                  "[calibrate]\n"
                  "model=data/sample/model.json\n"
                  "calib=data/sample/calib.csv\n"
                  "metric=regression\n"
                  "threshold=0.001\n"
                  "in-bits-range=2:16\n"
                  "out-bits-range=2:22\n"
                  "alpha-bits-max=24\n"
                  "lut-n=4,6\n"
                  "seed=7\n"
                  "task=sample\n");
  fmt::print("sample written to {}\n", out.string());
  return 0;
}
