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

#include "kanlut/lut_count.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kanlut/error.h"

namespace kanlut {

LutCount::LutCount(std::uint64_t numerator, int exponent)
    : numerator_(numerator), exponent_(exponent) {
  KANLUT_CHECK(exponent >= 0 && exponent < 62, "exponent out of range");
  normalize();
}

void LutCount::normalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && (numerator_ & 1) == 0) {
    numerator_ >>= 1;
    --exponent_;
  }
}

double LutCount::to_double() const {
  return std::ldexp(static_cast<double>(numerator_), -exponent_);
}

std::uint64_t LutCount::round_half_up() const {
  if (exponent_ == 0) return numerator_;
  const unsigned __int128 half = static_cast<unsigned __int128>(1)
                                 << (exponent_ - 1);
  return static_cast<std::uint64_t>((numerator_ + half) >> exponent_);
}

std::string LutCount::exact() const {
  std::string out = std::to_string(numerator_ >> exponent_);
  std::uint64_t frac = numerator_ & ((std::uint64_t{1} << exponent_) - 1);
  if (frac == 0) return out;
  out += '.';
  // Each decimal digit consumes one factor of 2 from the denominator.
  for (int e = exponent_; frac != 0; ) {
    const unsigned __int128 t = static_cast<unsigned __int128>(frac) * 10;
    out += static_cast<char>('0' + static_cast<int>(t >> e));
    frac = static_cast<std::uint64_t>(t & ((static_cast<unsigned __int128>(1) << e) - 1));
  }
  return out;
}

LutCount LutCount::operator+(const LutCount& o) const {
  const int e = std::max(exponent_, o.exponent_);
  const unsigned __int128 a = static_cast<unsigned __int128>(numerator_)
                              << (e - exponent_);
  const unsigned __int128 b = static_cast<unsigned __int128>(o.numerator_)
                              << (e - o.exponent_);
  const unsigned __int128 sum = a + b;
  KANLUT_CHECK(sum >> 64 == 0, "LUT count overflow");
  return LutCount(static_cast<std::uint64_t>(sum), e);
}

LutCount LutCount::operator*(std::uint64_t k) const {
  const unsigned __int128 p = static_cast<unsigned __int128>(numerator_) * k;
  KANLUT_CHECK(p >> 64 == 0, "LUT count overflow");
  return LutCount(static_cast<std::uint64_t>(p), exponent_);
}

bool LutCount::operator<(const LutCount& o) const {
  const int e = std::max(exponent_, o.exponent_);
  return (static_cast<unsigned __int128>(numerator_) << (e - exponent_)) <
         (static_cast<unsigned __int128>(o.numerator_) << (e - o.exponent_));
}

LutCount count_luts_theoretical(int b_in, int b_out, int lut_inputs) {
  KANLUT_CHECK(b_in >= 1 && b_out >= 1 && lut_inputs >= 1,
               "LUT count arguments must be positive");
  KANLUT_CHECK(b_in - lut_inputs < 40, "LUT count too large");
  if (b_in >= lut_inputs) {
    return LutCount::integer(static_cast<std::uint64_t>(b_out)
                             << (b_in - lut_inputs));
  }
  return LutCount(static_cast<std::uint64_t>(b_out), lut_inputs - b_in);
}

std::int64_t savings_basis_points(const LutCount& part, const LutCount& whole) {
  KANLUT_CHECK(whole.numerator() > 0, "savings need a non-zero baseline");
  const int e = std::max(part.exponent(), whole.exponent());
  const __int128 p = static_cast<__int128>(part.numerator())
                     << (e - part.exponent());
  const __int128 w = static_cast<__int128>(whole.numerator())
                     << (e - whole.exponent());
  const __int128 num = (w - p) * 10000;
  __int128 q = num / w;
  if (num % w != 0 && num < 0) --q;  // floor
  return static_cast<std::int64_t>(q);
}

std::string format_basis_points(std::int64_t bp) {
  const char* sign = bp < 0 ? "-" : "";
  const std::int64_t a = bp < 0 ? -bp : bp;
  return fmt::format("{}{}.{:02d}%", sign, a / 100, a % 100);
}

LutBlock PoolLayout::block(std::uint64_t index) const {
  KANLUT_CHECK(index < block_count, "block index out of range");
  LutBlock b;
  b.partition = static_cast<int>(index / b_out);
  b.output_bit = static_cast<int>(index % b_out);
  b.first_address = static_cast<Code>(b.partition) << lut_size;
  b.last_address = b.first_address + static_cast<Code>(max_code(lut_size));
  return b;
}

std::vector<LutBlock> PoolLayout::blocks() const {
  std::vector<LutBlock> out;
  out.reserve(block_count);
  for (std::uint64_t k = 0; k < block_count; ++k) out.push_back(block(k));
  return out;
}

PoolLayout pool_layout(int b_in, int b_out) {
  KANLUT_CHECK(b_in >= 1 && b_out >= 1, "pool bit-widths must be positive");
  PoolLayout p;
  p.b_in = b_in;
  p.b_out = b_out;
  p.lut_size = std::min(b_in, kFabricLutInputs);
  p.partitions = std::uint64_t{1} << std::max(0, b_in - kFabricLutInputs);
  p.block_count = static_cast<std::uint64_t>(b_out) * p.partitions;
  return p;
}

}  // namespace kanlut
