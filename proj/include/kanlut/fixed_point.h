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

#ifndef KANLUT_FIXED_POINT_H_
#define KANLUT_FIXED_POINT_H_

#include <cstdint>

// Integer arithmetic shared by the quantizer, the LUT compiler and the
// simulator. Every rounding point in the pipeline goes through this file.

namespace kanlut {

using Code = std::uint32_t;

inline constexpr int kMaxCodeBits = 32;
// Widest table address; tables hold 2^b_in entries.
inline constexpr int kMaxInputBits = 24;

constexpr std::uint64_t max_code(int bits) {
  return (std::uint64_t{1} << bits) - 1;
}

// floor(v + 1/2), computed without the v + 0.5 double rounding trap.
double round_half_up(double v);
std::int64_t round_half_up_to_int(double v);

// clamp(round((v - v_min) / s), 0, 2^bits - 1). Throws
// std::domain_error for non-finite v.
Code uniform_quantize(double v, double v_min, double step, int bits);

// value = mantissa * 2^-fraction_bits with exactly n_sig significant bits.
// fraction_bits may be negative (left shift) when the ratio exceeds 2^n_sig.
struct FixedPointScale {
  std::uint64_t mantissa = 1;
  int fraction_bits = 0;
  int n_sig = 1;

  double value() const;
  bool operator==(const FixedPointScale&) const = default;
};

FixedPointScale quantize_alpha(double alpha, int n_sig);

// (value * 2^-shift) rounded half up; arithmetic shift, so negative values
// round toward +inf on ties as well. shift <= 0 is an exact left shift.
__int128 shift_round_half_up(__int128 value, int shift);

// The quant-block conversion of an accumulated code into an edge input code:
// clamp(round(((code_in + bias) * m) / 2^f), 0, 2^clamp_bits - 1).
Code requantize(std::int64_t code_in, const FixedPointScale& scale,
                std::int64_t bias, int clamp_bits);

// Bits needed for an unsigned value (0 -> 0).
int bit_width(std::uint64_t v);
// Two's-complement bits needed to hold every value in [lo, hi].
int signed_bits(__int128 lo, __int128 hi);
int ceil_log2(std::uint64_t v);

}  // namespace kanlut

#endif  // KANLUT_FIXED_POINT_H_
