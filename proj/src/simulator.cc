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

#include "kanlut/simulator.h"

#include <fmt/format.h>

#include "kanlut/error.h"

namespace kanlut {
namespace {

bool fits_signed(__int128 v, int bits) {
  if (bits >= 127) return true;
  const __int128 lim = static_cast<__int128>(1) << (bits - 1);
  return v >= -lim && v < lim;
}

}  // namespace

Code quant_block(std::int64_t code_in, const FixedPointScale& scale,
                 std::int64_t bias, int clamp_bits, int biased_bits,
                 int product_bits) {
  KANLUT_CHECK(clamp_bits >= 1 && clamp_bits <= kMaxCodeBits,
               "quant block clamp width out of range");
  const __int128 biased = static_cast<__int128>(code_in) + bias;
  KANLUT_CHECK(biased_bits <= 0 || fits_signed(biased, biased_bits),
               fmt::format("biased sum overflows {} bits", biased_bits));
  const __int128 product = biased * static_cast<__int128>(scale.mantissa);
  KANLUT_CHECK(product_bits <= 0 || fits_signed(product, product_bits),
               fmt::format("product overflows {} bits", product_bits));
  const __int128 r = shift_round_half_up(product, scale.fraction_bits);
  if (r <= 0) return 0;
  const __int128 top = static_cast<__int128>(max_code(clamp_bits));
  return static_cast<Code>(r > top ? top : r);
}

Code lut_lookup(const EdgeTable& table, Code code) {
  KANLUT_CHECK(code < table.codes.size(),
               fmt::format("address {} outside a {}-entry table", code,
                           table.codes.size()));
  return table.codes[code];
}

std::int64_t accumulate(std::span<const Code> codes, int width_bits) {
  KANLUT_CHECK(width_bits >= 1 && width_bits < 63, "accumulator width");
  std::int64_t sum = 0;
  for (Code c : codes) sum += c;
  KANLUT_CHECK(static_cast<std::uint64_t>(sum) <= max_code(width_bits),
               fmt::format("accumulator overflows {} bits", width_bits));
  return sum;
}

SimResult run_model(const CompiledAccelerator& acc, std::span<const double> x) {
  if (static_cast<int>(x.size()) != acc.num_inputs()) {
    throw StructuralError(fmt::format("input has {} values, accelerator "
                                      "expects {}",
                                      x.size(), acc.num_inputs()));
  }
  SimResult res;
  res.trace.layers.resize(acc.layers.size());
  res.trace.cycles = cycle_count(acc);
  std::vector<std::int64_t> prev;
  std::vector<Code> column;
  for (std::size_t l = 0; l < acc.layers.size(); ++l) {
    const CompiledLayer& layer = acc.layers[l];
    LayerStages& st = res.trace.layers[l];
    st.quant.resize(layer.edges.size());
    st.lookup.resize(layer.edges.size());
    for (int i = 0; i < layer.n_in; ++i) {
      for (int j = 0; j < layer.n_out; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * layer.n_out + j;
        const CompiledEdge& e = layer.edges[k];
        const Code in =
            l == 0 ? uniform_quantize(x[i], e.grid_min, e.s_in_edge,
                                      e.table.b_in)
                   : quant_block(prev[i], e.scale, e.bias, e.table.b_in,
                                 e.biased_bits, e.product_bits);
        st.quant[k] = in;
        st.lookup[k] = lut_lookup(e.table, in);
      }
    }
    st.accum.resize(layer.n_out);
    column.resize(layer.n_in);
    for (int j = 0; j < layer.n_out; ++j) {
      for (int i = 0; i < layer.n_in; ++i) {
        column[i] = st.lookup[static_cast<std::size_t>(i) * layer.n_out + j];
      }
      st.accum[j] = accumulate(column, layer.accum_bits[j]);
    }
    prev = st.accum;
  }
  const CompiledLayer& last = acc.layers.back();
  res.outputs.resize(last.n_out);
  for (int j = 0; j < last.n_out; ++j) {
    res.outputs[j] = last.s_out[j] * static_cast<double>(prev[j]) +
                     acc.output_offsets[j];
  }
  return res;
}

Matrix run_batch(const CompiledAccelerator& acc, const Matrix& inputs,
                 std::vector<SimTrace>* traces) {
  Matrix out;
  out.rows = inputs.rows;
  out.cols = acc.num_outputs();
  out.data.reserve(out.rows * out.cols);
  if (traces) traces->clear();
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    SimResult res = run_model(acc, {inputs.row(r), inputs.cols});
    out.data.insert(out.data.end(), res.outputs.begin(), res.outputs.end());
    if (traces) traces->push_back(std::move(res.trace));
  }
  return out;
}

std::uint64_t cycle_count(const CompiledAccelerator& acc) {
  std::uint64_t cycles = 0;
  for (const CompiledLayer& layer : acc.layers) {
    cycles += 2 + 1 + ceil_log2(static_cast<std::uint64_t>(layer.n_in));
  }
  return cycles;
}

double latency_at(const CompiledAccelerator& acc, double clock_hz) {
  if (!(clock_hz > 0.0)) throw StructuralError("clock must be positive");
  return static_cast<double>(cycle_count(acc)) / clock_hz;
}

std::string format_trace(const SimTrace& trace, long row) {
  std::string out;
  for (std::size_t l = 0; l < trace.layers.size(); ++l) {
    const LayerStages& st = trace.layers[l];
    for (std::size_t k = 0; k < st.quant.size(); ++k) {
      fmt::format_to(std::back_inserter(out), "{} quant {} {} {}\n", row, l, k,
                     st.quant[k]);
    }
    for (std::size_t k = 0; k < st.lookup.size(); ++k) {
      fmt::format_to(std::back_inserter(out), "{} lookup {} {} {}\n", row, l,
                     k, st.lookup[k]);
    }
    for (std::size_t k = 0; k < st.accum.size(); ++k) {
      fmt::format_to(std::back_inserter(out), "{} accum {} {} {}\n", row, l, k,
                     st.accum[k]);
    }
  }
  return out;
}

}  // namespace kanlut
