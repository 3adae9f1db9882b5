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

#ifndef KANLUT_LUT_COUNT_H_
#define KANLUT_LUT_COUNT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "kanlut/fixed_point.h"

namespace kanlut {

// Exact non-negative dyadic rational numerator / 2^exponent. Enough for
// theoretical LUT counts, which are b_out * 2^(b_in - N).
class LutCount {
 public:
  LutCount() = default;
  LutCount(std::uint64_t numerator, int exponent);

  static LutCount integer(std::uint64_t v) { return LutCount(v, 0); }

  std::uint64_t numerator() const { return numerator_; }
  int exponent() const { return exponent_; }
  bool is_integer() const { return exponent_ == 0; }
  double to_double() const;
  std::uint64_t round_half_up() const;
  // Exact decimal expansion, e.g. "65680" or "1.25".
  std::string exact() const;

  LutCount operator+(const LutCount& o) const;
  LutCount& operator+=(const LutCount& o) { return *this = *this + o; }
  LutCount operator*(std::uint64_t k) const;
  bool operator==(const LutCount&) const = default;
  bool operator<(const LutCount& o) const;
  bool operator<=(const LutCount& o) const { return !(o < *this); }

 private:
  void normalize();
  std::uint64_t numerator_ = 0;
  int exponent_ = 0;
};

// b_out * 2^(b_in - N).
LutCount count_luts_theoretical(int b_in, int b_out, int lut_inputs);

// Floor of 10000 * (1 - part / whole): savings in hundredths of a percent.
std::int64_t savings_basis_points(const LutCount& part, const LutCount& whole);
std::string format_basis_points(std::int64_t bp);

inline constexpr int kFabricLutInputs = 6;

struct LutBlock {
  int partition = 0;       // which 2^lut_size slice of the input space
  int output_bit = 0;
  Code first_address = 0;
  Code last_address = 0;
};

// Fundamental blocks implementing one edge: one per (input partition, output
// bit); partition p serves addresses [p * 2^6, (p + 1) * 2^6).
struct PoolLayout {
  int b_in = 0;
  int b_out = 0;
  int lut_size = 0;
  std::uint64_t partitions = 0;
  std::uint64_t block_count = 0;

  LutBlock block(std::uint64_t index) const;
  std::vector<LutBlock> blocks() const;
};

PoolLayout pool_layout(int b_in, int b_out);

}  // namespace kanlut

#endif  // KANLUT_LUT_COUNT_H_
