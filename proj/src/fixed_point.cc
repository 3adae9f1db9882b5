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

#include "kanlut/fixed_point.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kanlut/error.h"

namespace kanlut {

double round_half_up(double v) {
  const double f = std::floor(v);
  return (v - f >= 0.5) ? f + 1.0 : f;
}

std::int64_t round_half_up_to_int(double v) {
  const double r = round_half_up(v);
  KANLUT_CHECK(std::isfinite(r) && std::fabs(r) < 9.0e18,
               "value does not fit a 64-bit integer");
  return static_cast<std::int64_t>(r);
}

Code uniform_quantize(double v, double v_min, double step, int bits) {
  KANLUT_CHECK(step > 0.0, "step must be positive");
  KANLUT_CHECK(bits >= 1 && bits <= kMaxCodeBits, "bit-width out of range");
  if (!std::isfinite(v)) {
    throw std::domain_error("uniform_quantize: non-finite value");
  }
  const double top = static_cast<double>(max_code(bits));
  const double q = (v - v_min) / step;
  if (!(q > 0.0)) return 0;
  if (q >= top) return static_cast<Code>(max_code(bits));
  return static_cast<Code>(std::min(round_half_up(q), top));
}

double FixedPointScale::value() const {
  return std::ldexp(static_cast<double>(mantissa), -fraction_bits);
}

FixedPointScale quantize_alpha(double alpha, int n_sig) {
  KANLUT_CHECK(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  KANLUT_CHECK(n_sig >= 1 && n_sig <= 62, "n_sig out of range");
  int exponent = 0;
  std::frexp(alpha, &exponent);  // alpha in [2^(e-1), 2^e)
  // alpha * 2^f lands in [2^(n-1), 2^n).
  int f = n_sig - exponent;
  double m = round_half_up(std::ldexp(alpha, f));
  if (m >= std::ldexp(1.0, n_sig)) {
    --f;
    m = round_half_up(std::ldexp(alpha, f));
  }
  FixedPointScale s;
  s.mantissa = static_cast<std::uint64_t>(m);
  s.fraction_bits = f;
  s.n_sig = n_sig;
  return s;
}

__int128 shift_round_half_up(__int128 value, int shift) {
  if (shift <= 0) return value * (static_cast<__int128>(1) << -shift);
  const __int128 half = static_cast<__int128>(1) << (shift - 1);
  return (value + half) >> shift;
}

Code requantize(std::int64_t code_in, const FixedPointScale& scale,
                std::int64_t bias, int clamp_bits) {
  const __int128 product =
      (static_cast<__int128>(code_in) + bias) * scale.mantissa;
  const __int128 rounded = shift_round_half_up(product, scale.fraction_bits);
  if (rounded <= 0) return 0;
  const auto top = static_cast<__int128>(max_code(clamp_bits));
  return static_cast<Code>(rounded > top ? top : rounded);
}

int bit_width(std::uint64_t v) { return static_cast<int>(std::bit_width(v)); }

int signed_bits(__int128 lo, __int128 hi) {
  int bits = 1;
  while (true) {
    const __int128 min = -(static_cast<__int128>(1) << (bits - 1));
    const __int128 max = (static_cast<__int128>(1) << (bits - 1)) - 1;
    if (lo >= min && hi <= max) return bits;
    ++bits;
  }
}

int ceil_log2(std::uint64_t v) {
  if (v <= 1) return 0;
  return bit_width(v - 1);
}

}  // namespace kanlut
