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

#include "kanlut/error.h"

#include <fmt/format.h>

namespace kanlut {
namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "validation failed";
  for (const auto& s : v) {
    out += "\n  ";
    out += s;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)),
      violations_(std::move(violations)) {}

MismatchError::MismatchError(const std::string& stage, int layer, int index,
                             long row)
    : std::runtime_error(fmt::format(
          "bit-exact mismatch at stage '{}', layer {}, index {}, input row {}",
          stage, layer, index, row)),
      stage_(stage),
      layer_(layer),
      index_(index),
      row_(row) {}

void fail_invariant(const char* expr, const char* file, int line,
                    const std::string& msg) {
  throw InvariantViolation(
      fmt::format("{}:{}: check '{}' failed: {}", file, line, expr, msg));
}

}  // namespace kanlut
