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

#ifndef SVRL_BASELINES_HPP_
#define SVRL_BASELINES_HPP_

#include "svrl/random.hpp"
#include "svrl/world.hpp"

namespace svrl {

// left = p_0 - k_p * e, right = p_0 + k_p * e, with e the wrapped bearing
// error to the goal.
struct PControllerConfig {
  double k_p = 1.0;
  double p_0 = 0.8;

  void validate() const;
  friend bool operator==(const PControllerConfig&, const PControllerConfig&) = default;
};

// Bearing of the goal relative to the current heading, in (-pi, pi].
double goal_bearing_error(const RoverPose& pose, Vec2 goal);

// Outputs are clamped into [0, 1] since wheels only turn forward.
WheelCommand p_control(const RoverPose& pose, Vec2 goal, const PControllerConfig& config);

// Independent uniform draws on [0, 1) for each side.
WheelCommand random_control(Rng& rng);

}  // namespace svrl

#endif  // SVRL_BASELINES_HPP_
