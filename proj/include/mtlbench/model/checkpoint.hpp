// Copyright 2026 The mtlbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "mtlbench/model/model.hpp"

namespace mtlbench {

/// Text checkpoint: architecture descriptor, dropout RNG state, then every
/// parameter and buffer as hexadecimal floats, so save -> load is exact.
void save_checkpoint(Model& model, std::ostream& out);
void save_checkpoint(Model& model, const std::filesystem::path& path);
std::unique_ptr<Model> load_checkpoint(std::istream& in);
std::unique_ptr<Model> load_checkpoint(const std::filesystem::path& path);

}  // namespace mtlbench
