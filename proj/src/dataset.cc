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

#include "kanlut/dataset.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "kanlut/error.h"
#include "kanlut/io_util.h"

namespace kanlut {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_row(std::string_view line, std::vector<double>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = trim(line.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start));
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || res.ec != std::errc() ||
        res.ptr != cell.data() + cell.size()) {
      return false;
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return true;
}

std::uint32_t read_be32(const std::string& bytes, std::size_t offset) {
  if (offset + 4 > bytes.size()) throw ValidationError({"IDX file truncated"});
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<unsigned char>(bytes[offset + i]);
  }
  return v;
}

}  // namespace

std::string_view metric_kind_name(MetricKind kind) {
  return kind == MetricKind::kRegression ? "regression" : "classification";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "regression") return MetricKind::kRegression;
  if (name == "classification") return MetricKind::kClassification;
  throw ValidationError({fmt::format("unknown metric kind '{}'", name)});
}

std::vector<std::string> validate_dataset(const Dataset& d) {
  std::vector<std::string> v;
  if (d.inputs.rows != d.targets.rows) {
    v.push_back(fmt::format("{} input rows but {} target rows", d.inputs.rows,
                            d.targets.rows));
  }
  if (d.inputs.rows == 0) v.push_back("dataset is empty");
  if (d.kind == MetricKind::kClassification) {
    if (d.targets.cols != 1) v.push_back("classification needs one label column");
    for (std::size_t r = 0; r < d.targets.rows && d.targets.cols == 1; ++r) {
      const double y = d.targets.at(r, 0);
      if (y != std::floor(y) || y < 0 || y >= d.num_classes) {
        v.push_back(fmt::format("row {}: label {} outside [0, {})", r, y,
                                d.num_classes));
        break;
      }
    }
  }
  for (double x : d.inputs.data) {
    if (!std::isfinite(x)) {
      v.push_back("non-finite input value");
      break;
    }
  }
  return v;
}

Matrix parse_csv(std::string_view text) {
  Matrix m;
  std::vector<double> row;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (!parse_row(line, row)) {
      if (m.rows == 0 && line_no == 1) continue;  // header
      throw ValidationError(
          {fmt::format("CSV line {}: non-numeric value", line_no)});
    }
    if (m.rows == 0) {
      m.cols = row.size();
    } else if (row.size() != m.cols) {
      throw ValidationError({fmt::format(
          "CSV line {}: {} columns, expected {}", line_no, row.size(), m.cols)});
    }
    m.data.insert(m.data.end(), row.begin(), row.end());
    ++m.rows;
    if (nl == text.size()) break;
  }
  return m;
}

Matrix read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path));
}

std::string format_csv(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out += ',';
      out += format_double(m.at(r, c));
    }
    out += '\n';
  }
  return out;
}

Dataset dataset_from_matrix(const Matrix& m, int n_inputs, int n_outputs,
                            MetricKind kind) {
  const std::size_t target_cols =
      kind == MetricKind::kRegression ? static_cast<std::size_t>(n_outputs) : 1;
  if (m.cols != static_cast<std::size_t>(n_inputs) + target_cols) {
    throw ValidationError({fmt::format(
        "dataset has {} columns; model needs {} inputs + {} target columns",
        m.cols, n_inputs, target_cols)});
  }
  Dataset d;
  d.kind = kind;
  d.num_classes = kind == MetricKind::kClassification ? n_outputs : 0;
  d.inputs.rows = d.targets.rows = m.rows;
  d.inputs.cols = n_inputs;
  d.targets.cols = target_cols;
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.row(r);
    d.inputs.data.insert(d.inputs.data.end(), row, row + n_inputs);
    d.targets.data.insert(d.targets.data.end(), row + n_inputs,
                          row + m.cols);
  }
  auto v = validate_dataset(d);
  if (!v.empty()) throw ValidationError(std::move(v));
  return d;
}

Dataset load_csv_dataset(const std::filesystem::path& path, int n_inputs,
                         int n_outputs, MetricKind kind) {
  return dataset_from_matrix(read_csv(path), n_inputs, n_outputs, kind);
}

Dataset load_idx_dataset(const std::filesystem::path& images,
                         const std::filesystem::path& labels,
                         PixelScaling scaling, std::size_t limit) {
  const std::string img = read_text_file(images);
  const std::string lab = read_text_file(labels);
  if (read_be32(img, 0) != 0x00000803) {
    throw ValidationError({"IDX images: bad magic"});
  }
  if (read_be32(lab, 0) != 0x00000801) {
    throw ValidationError({"IDX labels: bad magic"});
  }
  std::size_t count = read_be32(img, 4);
  const std::size_t pixels =
      static_cast<std::size_t>(read_be32(img, 8)) * read_be32(img, 12);
  if (read_be32(lab, 4) != count) {
    throw ValidationError({"IDX image and label counts differ"});
  }
  if (img.size() < 16 + count * pixels || lab.size() < 8 + count) {
    throw ValidationError({"IDX file truncated"});
  }
  if (limit && limit < count) count = limit;
  Dataset d;
  d.kind = MetricKind::kClassification;
  d.num_classes = 10;
  d.inputs.rows = d.targets.rows = count;
  d.inputs.cols = pixels;
  d.targets.cols = 1;
  d.inputs.data.resize(count * pixels);
  d.targets.data.resize(count);
  const double scale = (scaling.hi - scaling.lo) / 255.0;
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t p = 0; p < pixels; ++p) {
      const auto byte = static_cast<unsigned char>(img[16 + r * pixels + p]);
      d.inputs.data[r * pixels + p] = scaling.lo + scale * byte;
    }
    d.targets.data[r] = static_cast<unsigned char>(lab[8 + r]);
  }
  auto v = validate_dataset(d);
  if (!v.empty()) throw ValidationError(std::move(v));
  return d;
}

std::string dataset_digest(const Dataset& d) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 unavailable");
  }
  auto put = [&](std::uint64_t bits) {
    unsigned char le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(bits >> (8 * i));
    EVP_DigestUpdate(ctx.get(), le, sizeof(le));
  };
  put(static_cast<std::uint64_t>(d.kind));
  put(d.inputs.rows);
  put(d.inputs.cols);
  put(d.targets.cols);
  for (const Matrix* m : {&d.inputs, &d.targets}) {
    for (double v : m->data) put(std::bit_cast<std::uint64_t>(v));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace kanlut
