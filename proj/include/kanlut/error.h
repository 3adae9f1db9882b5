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

#ifndef KANLUT_ERROR_H_
#define KANLUT_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace kanlut {

// Dimension mismatches and out-of-range indices in API calls.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input files.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double best_metric)
      : std::runtime_error(what), best_metric_(best_metric) {}
  double best_metric() const { return best_metric_; }

 private:
  double best_metric_;
};

// Simulator and quantized reference disagree. Identifies the first
// divergent stage.
class MismatchError : public std::runtime_error {
 public:
  MismatchError(const std::string& stage, int layer, int index, long row);
  const std::string& stage() const { return stage_; }
  int layer() const { return layer_; }
  int index() const { return index_; }
  long row() const { return row_; }

 private:
  std::string stage_;
  int layer_;
  int index_;
  long row_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal invariant broken (register overflow, bad table address). These are
// compiler bugs, never data errors.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] void fail_invariant(const char* expr, const char* file, int line,
                                 const std::string& msg);

}  // namespace kanlut

#define KANLUT_CHECK(cond, msg)                                   \
  do {                                                            \
    if (!(cond)) {                                                \
      ::kanlut::fail_invariant(#cond, __FILE__, __LINE__, (msg)); \
    }                                                             \
  } while (0)

#endif  // KANLUT_ERROR_H_
