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

#ifndef KANLUT_MEM_FILE_H_
#define KANLUT_MEM_FILE_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kanlut/tabulate.h"

namespace kanlut {

// Textual memory image: one lowercase hex word per line, address 0 first,
// each word zero-padded to ceil(b_out / 4) digits.
std::string format_mem(const EdgeTable& table);

// Inverse of format_mem. Throws IoError on a wrong line count, a bad digit
// or a word wider than b_out bits.
std::vector<Code> parse_mem(std::string_view text, int b_in, int b_out);
std::vector<Code> read_mem_file(const std::filesystem::path& path, int b_in,
                                int b_out);

// "l{layer}_e{source}_{target}.mem"
std::string mem_file_name(int layer, int source, int target);

}  // namespace kanlut

#endif  // KANLUT_MEM_FILE_H_
