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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "test_support.h"

namespace kanlut {
namespace {

TEST(RoundHalfUp, TiesGoUp) {
  EXPECT_EQ(round_half_up(2.5), 3.0);
  EXPECT_EQ(round_half_up(-2.5), -2.0);
  EXPECT_EQ(round_half_up(2.4999999999999996), 2.0);
  EXPECT_EQ(round_half_up(0.49999999999999994), 0.0);
  EXPECT_EQ(round_half_up_to_int(-0.5), 0);
}

TEST(UniformQuantize, WorkedExample) {
  // 2.18 on [0, 3.1] with step 0.1 at 5 bits.
  EXPECT_EQ(uniform_quantize(2.18, 0.0, 0.1, 5), 22u);
}

TEST(UniformQuantize, ClampsAndRejectsNonFinite) {
  EXPECT_EQ(uniform_quantize(-1.0, 0.0, 0.1, 4), 0u);
  EXPECT_EQ(uniform_quantize(100.0, 0.0, 0.1, 4), 15u);
  EXPECT_EQ(uniform_quantize(0.0, 0.0, 1.0, 1), 0u);
  EXPECT_THROW(uniform_quantize(NAN, 0.0, 1.0, 4), std::domain_error);
  EXPECT_THROW(uniform_quantize(INFINITY, 0.0, 1.0, 4), std::domain_error);
}

TEST(UniformQuantize, AgreesWithDefinitionAndBoundsError) {
  SplitRng rng(20);
  for (int n = 0; n < 5000; ++n) {
    const int bits = rng.uniform_int(1, 24);
    const double lo = rng.uniform(-10.0, 10.0);
    const double range = rng.uniform(1e-3, 50.0);
    const double s = range / static_cast<double>(max_code(bits));
    const double v = rng.uniform(lo, lo + range);
    const Code q = uniform_quantize(v, lo, s, bits);
    EXPECT_EQ(q, testing::naive_quantize(v, lo, s, bits));
    EXPECT_LE(std::fabs(lo + q * s - v), s / 2 + 1e-12 * (1.0 + std::fabs(v)));
  }
}

TEST(QuantizeAlpha, WorkedExamples) {
  const FixedPointScale a = quantize_alpha(0.02, 3);
  EXPECT_EQ(a.mantissa, 5u);
  EXPECT_EQ(a.fraction_bits, 8);
  EXPECT_EQ(a.value(), 0.01953125);
  const FixedPointScale b = quantize_alpha(0.1, 3);
  EXPECT_EQ(b.mantissa, 6u);
  EXPECT_EQ(b.fraction_bits, 6);
  const FixedPointScale c = quantize_alpha(0.5, 1);
  EXPECT_EQ(c.mantissa, 1u);
  EXPECT_EQ(c.fraction_bits, 1);
}

TEST(QuantizeAlpha, CarryIntoNextOctave) {
  // 0.99 needs 2^3 at n = 3 after rounding; expect 4 * 2^-2.
  const FixedPointScale s = quantize_alpha(0.99, 3);
  EXPECT_EQ(s.mantissa, 4u);
  EXPECT_EQ(s.fraction_bits, 2);
}

TEST(QuantizeAlpha, NegativeFractionBitsForLargeRatios) {
  const FixedPointScale s = quantize_alpha(1000.0, 3);
  EXPECT_EQ(s.mantissa, 4u);
  EXPECT_EQ(s.fraction_bits, -8);
  EXPECT_EQ(s.value(), 1024.0);
}

TEST(QuantizeAlpha, NearestAmongAllNBitMantissas) {
  SplitRng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(1, 9);
    const double alpha = std::exp2(rng.uniform(-20.0, 20.0));
    long double best = INFINITY;
    for (int f = -40; f <= 60; ++f) {
      for (std::uint64_t m = std::uint64_t{1} << (n - 1); m < (1u << n); ++m) {
        best = std::min(best, std::fabs(std::ldexp(static_cast<long double>(m), -f) -
                                        static_cast<long double>(alpha)));
      }
    }
    const FixedPointScale s = quantize_alpha(alpha, n);
    EXPECT_GE(s.mantissa, std::uint64_t{1} << (n - 1));
    EXPECT_LT(s.mantissa, std::uint64_t{1} << n);
    const long double err =
        std::fabs(static_cast<long double>(s.value()) - alpha);
    EXPECT_LE(err, best * (1.0L + 1e-12L) + 1e-300L) << alpha << " n=" << n;
  }
}

TEST(QuantizeAlpha, RelativeErrorBound) {
  SplitRng rng(22);
  for (int trial = 0; trial < 5000; ++trial) {
    const int n = rng.uniform_int(1, 24);
    const double alpha = std::exp2(rng.uniform(-30.0, 30.0));
    const FixedPointScale s = quantize_alpha(alpha, n);
    EXPECT_LE(std::fabs(s.value() - alpha) / alpha, std::exp2(-n));
  }
}

TEST(ShiftRoundHalfUp, Behaviour) {
  EXPECT_EQ(shift_round_half_up(2250, 8), 9);   // 8.79 -> 9
  EXPECT_EQ(shift_round_half_up(128, 8), 1);    // tie goes up
  EXPECT_EQ(shift_round_half_up(-128, 8), 0);   // tie toward +inf
  EXPECT_EQ(shift_round_half_up(-129, 8), -1);
  EXPECT_EQ(shift_round_half_up(7, 0), 7);
  EXPECT_EQ(shift_round_half_up(3, -2), 12);
}

TEST(Requantize, WorkedExampleAndClamp) {
  const FixedPointScale s{5, 8, 3};
  EXPECT_EQ(requantize(450, s, 0, 4), 9u);
  EXPECT_EQ(requantize(450, s, 0, 3), 7u);
  EXPECT_EQ(requantize(0, s, 7, 4), 0u);
  EXPECT_EQ(requantize(-1000, s, 0, 4), 0u);
  EXPECT_EQ(requantize(13, FixedPointScale{1, 0, 1}, 0, 8), 13u);
}

TEST(Requantize, MatchesRationalEvaluation) {
  SplitRng rng(23);
  for (int trial = 0; trial < 5000; ++trial) {
    const int n = rng.uniform_int(1, 20);
    const FixedPointScale s = quantize_alpha(std::exp2(rng.uniform(-12, 4)), n);
    const std::int64_t a = rng.uniform_int(0, 1 << 22);
    const std::int64_t b = rng.uniform_int(-(1 << 20), 1 << 20);
    const int clamp = rng.uniform_int(1, 24);
    const long double exact =
        std::ldexp(static_cast<long double>(a + b) * s.mantissa,
                   -s.fraction_bits);
    long double r = std::floor(exact + 0.5L);
    r = std::min(std::max(r, 0.0L), static_cast<long double>(max_code(clamp)));
    EXPECT_EQ(requantize(a, s, b, clamp), static_cast<Code>(r));
  }
}

TEST(Widths, Helpers) {
  EXPECT_EQ(bit_width(0), 0);
  EXPECT_EQ(bit_width(1), 1);
  EXPECT_EQ(bit_width(255), 8);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(5), 3);
  EXPECT_EQ(ceil_log2(784), 10);
  EXPECT_EQ(ceil_log2(64), 6);
  EXPECT_EQ(signed_bits(0, 0), 1);
  EXPECT_EQ(signed_bits(-1, 0), 1);
  EXPECT_EQ(signed_bits(0, 1), 2);
  EXPECT_EQ(signed_bits(-128, 127), 8);
  EXPECT_EQ(signed_bits(-129, 0), 9);
}

}  // namespace
}  // namespace kanlut
