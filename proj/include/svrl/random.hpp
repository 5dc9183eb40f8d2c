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

#ifndef SVRL_RANDOM_HPP_
#define SVRL_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string>

namespace svrl {

// Seedable generator with platform-independent sampling. The standard
// distributions are implementation-defined, so uniform and normal draws are
// derived from the raw 64-bit engine output here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; the sine branch is discarded so the state stays a pure
  // function of the number of draws.
  double normal();

  // Serialized engine state (the textual mt19937_64 representation).
  std::string state() const;
  void set_state(const std::string& text);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace svrl

#endif  // SVRL_RANDOM_HPP_
