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

#ifndef KANLUT_DATASET_H_
#define KANLUT_DATASET_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kanlut {

enum class MetricKind { kRegression, kClassification };

std::string_view metric_kind_name(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

// Row-major real matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Regression: targets has one column per model output. Classification:
// targets has a single column of integer labels in [0, classes).
struct Dataset {
  MetricKind kind = MetricKind::kRegression;
  Matrix inputs;
  Matrix targets;
  int num_classes = 0;

  std::size_t size() const { return inputs.rows; }
  int label(std::size_t r) const { return static_cast<int>(targets.at(r, 0)); }
};

// Calibration data is a dataset used for bit-width search.
using CalibrationSet = Dataset;

std::vector<std::string> validate_dataset(const Dataset& d);

// Numeric CSV; a leading non-numeric line is treated as a header.
Matrix read_csv(const std::filesystem::path& path);
Matrix parse_csv(std::string_view text);
std::string format_csv(const Matrix& m);

// Splits a CSV into inputs (first n_inputs columns) and targets. Throws
// ValidationError if the column count does not match the model.
Dataset dataset_from_matrix(const Matrix& m, int n_inputs, int n_outputs,
                            MetricKind kind);
Dataset load_csv_dataset(const std::filesystem::path& path, int n_inputs,
                         int n_outputs, MetricKind kind);

// Linear mapping of raw IDX pixel bytes [0, 255] onto [lo, hi].
struct PixelScaling {
  double lo = 0.0;
  double hi = 1.0;
};

// MNIST-style IDX pair: images (magic 0x00000803) and labels (0x00000801).
Dataset load_idx_dataset(const std::filesystem::path& images,
                         const std::filesystem::path& labels,
                         PixelScaling scaling, std::size_t limit = 0);

// Hex SHA-256 over the dataset's shape and the bit patterns of every value.
std::string dataset_digest(const Dataset& d);

}  // namespace kanlut

#endif  // KANLUT_DATASET_H_
