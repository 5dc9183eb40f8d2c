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

#include "svrl/baselines.hpp"

#include <cmath>

#include "svrl/errors.hpp"

namespace svrl {

void PControllerConfig::validate() const {
  if (!(p_0 >= 0.0 && p_0 <= 1.0)) throw ConfigError("p_controller.p_0 must lie in [0, 1]");
  if (!(k_p >= 0.0)) throw ConfigError("p_controller.k_p must be non-negative");
}

double goal_bearing_error(const RoverPose& pose, Vec2 goal) {
  return wrap_angle(std::atan2(goal.y - pose.y, goal.x - pose.x) - pose.heading);
}

WheelCommand p_control(const RoverPose& pose, Vec2 goal, const PControllerConfig& config) {
  const double e = goal_bearing_error(pose, goal);
  return WheelCommand::clamped(config.p_0 - config.k_p * e, config.p_0 + config.k_p * e);
}

WheelCommand random_control(Rng& rng) {
  const double left = rng.uniform();
  const double right = rng.uniform();
  return {left, right};
}

}  // namespace svrl
