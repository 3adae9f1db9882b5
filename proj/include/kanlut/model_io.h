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

#ifndef KANLUT_MODEL_IO_H_
#define KANLUT_MODEL_IO_H_

#include <filesystem>
#include <string>

#include "kanlut/model.h"

namespace kanlut {

inline constexpr int kModelFormatVersion = 1;

// Interchange format: JSON, version-tagged, unknown keys rejected, edges in
// any order but complete. Throws ValidationError naming the offending
// layer/edge.
KanModel parse_model(const std::string& text);
KanModel load_model(const std::filesystem::path& path);

std::string serialize_model(const KanModel& model);
void save_model(const KanModel& model, const std::filesystem::path& path);

}  // namespace kanlut

#endif  // KANLUT_MODEL_IO_H_
