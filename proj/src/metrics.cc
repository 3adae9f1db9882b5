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

#include "kanlut/metrics.h"

#include <cmath>

#include "kanlut/error.h"

namespace kanlut {

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

double rmse(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw StructuralError("rmse: shapes differ");
  }
  if (pred.empty()) throw StructuralError("rmse: empty input");
  CompensatedSum sum;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    sum.add(d * d);
  }
  return std::sqrt(sum.value() / static_cast<double>(pred.size()));
}

double rms(std::span<const double> values) {
  if (values.empty()) throw StructuralError("rms: empty input");
  CompensatedSum sum;
  for (double v : values) sum.add(v * v);
  return std::sqrt(sum.value() / static_cast<double>(values.size()));
}

int argmax(std::span<const double> scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  return best;
}

double accuracy(const Matrix& scores, std::span<const int> labels) {
  if (scores.rows != labels.size()) {
    throw StructuralError("accuracy: score rows and labels differ");
  }
  if (scores.rows == 0) throw StructuralError("accuracy: empty input");
  std::size_t correct = 0;
  for (std::size_t r = 0; r < scores.rows; ++r) {
    if (argmax({scores.row(r), scores.cols}) == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.rows);
}

double accuracy(const Matrix& scores, const Dataset& data) {
  std::vector<int> labels(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) labels[r] = data.label(r);
  return accuracy(scores, labels);
}

double degradation(const Matrix& reference, const Matrix& quantized,
                   const Dataset& data) {
  if (data.kind == MetricKind::kClassification) {
    return accuracy(reference, data) - accuracy(quantized, data);
  }
  const double scale = rms(data.targets.data);
  const double denom = scale > 0.0 ? scale : 1.0;
  return (rmse(quantized.data, data.targets.data) -
          rmse(reference.data, data.targets.data)) /
         denom;
}

}  // namespace kanlut
