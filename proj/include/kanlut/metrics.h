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

#ifndef KANLUT_METRICS_H_
#define KANLUT_METRICS_H_

#include <span>

#include "kanlut/dataset.h"

namespace kanlut {

// Neumaier-compensated running sum; result is independent of how the inputs
// were chunked to within a few ulps.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double rmse(std::span<const double> pred, std::span<const double> target);
double rms(std::span<const double> values);

// Lowest index wins ties.
int argmax(std::span<const double> scores);
// Fraction of rows whose argmax equals the label.
double accuracy(const Matrix& scores, std::span<const int> labels);
double accuracy(const Matrix& scores, const Dataset& data);

// Float-vs-quantized degradation of `quantized` against `reference` on `data`.
// Regression: (RMSE(q, t) - RMSE(f, t)) / RMS(t). Classification:
// accuracy(f) - accuracy(q).
double degradation(const Matrix& reference, const Matrix& quantized,
                   const Dataset& data);

// Absolute slack applied when comparing a metric to its budget, so that
// candidates whose outputs do not change pass a zero threshold.
inline constexpr double kMetricSlack = 1e-12;

struct MetricBudget {
  MetricKind kind = MetricKind::kRegression;
  double threshold = 0.0;

  bool admits(double metric) const { return metric <= threshold + kMetricSlack; }
};

}  // namespace kanlut

#endif  // KANLUT_METRICS_H_
