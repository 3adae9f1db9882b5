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

#include "kanlut/mem_file.h"

#include <charconv>

#include <fmt/format.h>

#include "kanlut/error.h"
#include "kanlut/io_util.h"

namespace kanlut {

std::string format_mem(const EdgeTable& table) {
  KANLUT_CHECK(table.codes.size() == max_code(table.b_in) + 1,
               "table size does not match b_in");
  const int digits = (table.b_out + 3) / 4;
  std::string out;
  out.reserve(table.codes.size() * (digits + 1));
  for (Code c : table.codes) {
    KANLUT_CHECK(c <= max_code(table.b_out), "code wider than b_out");
    fmt::format_to(std::back_inserter(out), "{:0{}x}\n", c, digits);
  }
  return out;
}

std::vector<Code> parse_mem(std::string_view text, int b_in, int b_out) {
  if (b_in < 1 || b_in > kMaxInputBits || b_out < 1 || b_out > kMaxCodeBits) {
    throw IoError(fmt::format("bad memory geometry {}x{}", b_in, b_out));
  }
  const std::uint64_t expected = max_code(b_in) + 1;
  std::vector<Code> codes;
  codes.reserve(expected);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      throw IoError(fmt::format("memory line {} is empty", line_no));
    }
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), v, 16);
    if (ec != std::errc() || p != line.data() + line.size()) {
      throw IoError(fmt::format("memory line {}: bad hex word '{}'", line_no,
                               line));
    }
    if (v > max_code(b_out)) {
      throw IoError(fmt::format("memory line {}: word {:x} exceeds {} bits",
                                line_no, v, b_out));
    }
    codes.push_back(static_cast<Code>(v));
  }
  if (codes.size() != expected) {
    throw IoError(fmt::format("memory has {} words, expected {}",
                              codes.size(), expected));
  }
  return codes;
}

std::vector<Code> read_mem_file(const std::filesystem::path& path, int b_in,
                                int b_out) {
  try {
    return parse_mem(read_text_file(path), b_in, b_out);
  } catch (const IoError& e) {
    throw IoError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string mem_file_name(int layer, int source, int target) {
  return fmt::format("l{}_e{}_{}.mem", layer, source, target);
}

}  // namespace kanlut
