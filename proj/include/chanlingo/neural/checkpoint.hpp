// SPDX-License-Identifier: Apache-2.0
//
// chanlingo: channel prediction over vocabularies of channel changes
// Copyright (C) 2026 The chanlingo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "chanlingo/neural/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace chanlingo::neural
{

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// In-memory image of a CKPT file: sorted key=value metadata plus named
/// tensors in file order. Tensor data is stored as float32.
struct Checkpoint
{
    std::map<std::string, std::string> metadata;
    std::vector<std::pair<std::string, Tensor>> tensors;

    const Tensor *find(const std::string &name) const;

    // Throws CheckpointMismatch naming `key` when it is absent or differs.
    // A vocabulary_hash disagreement is reported as "vocabulary-mismatch".
    void require(const std::string &key, const std::string &expected) const;
    const std::string &get(const std::string &key) const;

    bool operator==(const Checkpoint &) const = default;
};

std::string serialize_checkpoint(const Checkpoint &ckpt);
Checkpoint deserialize_checkpoint(const std::string &bytes, const std::string &source = "<memory>");

void save_checkpoint(const Checkpoint &ckpt, const std::filesystem::path &path);
Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace chanlingo::neural
