// Copyright 2026 The svrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVRL_CHECKPOINT_HPP_
#define SVRL_CHECKPOINT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "svrl/policy.hpp"

namespace svrl {

inline constexpr char kCheckpointMagic[4] = {'S', 'V', 'R', 'L'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (all integers little-endian):
//   "SVRL" | u32 version | u32 config length | config text (key=value lines)
//   | u32 tensor count | per tensor: u32 name length, name, u32 rank, u64 dims
//   | f64 payload of every tensor in manifest order.
std::vector<std::uint8_t> encode_checkpoint(const PolicyNetwork& net);
PolicyNetwork decode_checkpoint(const std::vector<std::uint8_t>& bytes);

// Throws IoError on I/O failure and ConfigError on a malformed file.
void save_checkpoint(const PolicyNetwork& net, const std::string& path);
PolicyNetwork load_checkpoint(const std::string& path);

}  // namespace svrl

#endif  // SVRL_CHECKPOINT_HPP_
