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

#ifndef KANLUT_SYNTHETIC_H_
#define KANLUT_SYNTHETIC_H_

#include <cstdint>
#include <random>
#include <vector>

#include "kanlut/dataset.h"
#include "kanlut/model.h"

namespace kanlut {

// Reproducible pseudo-random models and data for tests, benchmarks and the
// bundled sample. Only the raw mt19937_64 stream is used, so the values do
// not depend on the standard library's distribution implementations.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);     // inclusive
  double normal();                     // Box-Muller

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SyntheticModelOptions {
  int intervals = 5;
  int order = 3;
  double input_min = -1.0;
  double input_max = 1.0;
  double coeff_scale = 1.0;
  double w_b_scale = 0.5;
  // Later layers get a grid covering the bound on the previous layer's
  // outputs; otherwise every layer uses [input_min, input_max].
  bool fit_grids = true;
};

KanModel random_model(const std::vector<int>& shape, std::uint64_t seed,
                      const SyntheticModelOptions& options = {});

// Inputs uniform over the first grid; targets = float forward + N(0, sigma).
Dataset synthetic_regression(const KanModel& model, std::size_t rows,
                             double noise_sigma, std::uint64_t seed);

}  // namespace kanlut

#endif  // KANLUT_SYNTHETIC_H_
