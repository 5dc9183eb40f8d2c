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

#ifndef SVRL_WORLD_HPP_
#define SVRL_WORLD_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svrl/random.hpp"

namespace svrl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

// Wraps an angle into (-pi, pi].
double wrap_angle(double radians);

// Planar rover state. Heading is measured counterclockwise from +x.
struct RoverPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const RoverPose&, const RoverPose&) = default;
};

struct WorldConfig {
  double map_side = 25.0;
  int n_obstacles = 4;
  double goal_min_dist = 10.0;
  double goal_edge_margin = 1.0;
  double obstacle_min_dist_from_start = 4.0;
  double collision_radius = 0.5;
  double win_radius = 1.0;
  double max_episode_time = 100.0;
  double v_max = 0.2;
  double track_width = 0.3;
  double physics_dt = 0.2;
  int substeps_per_action = 5;
  double obstacle_radius_min = 0.2;
  double obstacle_radius_max = 0.5;

  // Throws ConfigError when an invariant is broken.
  void validate() const;
  // Upper bound on control steps per episode.
  int max_control_steps() const;

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

// Reward weights of R = c_veloc * progress - c_crash - c_fall - c_timeout.
struct RewardConfig {
  double c_veloc = 100.0;
  double c_crash = 100.0;
  double c_fall = 100.0;
  double c_timeout = 20.0;

  void validate() const;
  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

struct Obstacle {
  Vec2 center;
  // Visual radius of the rendered rock sphere; collisions use the fixed
  // collision_radius around the center.
  double radius = 0.0;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

enum class Outcome { Running, Success, Collision, Fall, Timeout };

const char* outcome_name(Outcome outcome);
Outcome parse_outcome(std::string_view name);
inline bool is_terminal(Outcome outcome) { return outcome != Outcome::Running; }

// Normalized forward-only wheel speeds.
struct WheelCommand {
  double left = 0.0;
  double right = 0.0;

  // Clamps both sides into [0, 1]; NaN maps to 0.
  static WheelCommand clamped(double left, double right);
  friend bool operator==(const WheelCommand&, const WheelCommand&) = default;
};

struct World {
  WorldConfig config;
  std::uint64_t seed = 0;
  RoverPose rover;
  Vec2 goal;
  std::vector<Obstacle> obstacles;
  // Physics substeps executed so far; elapsed time is derived from it so the
  // clock never drifts from the substep grid.
  std::int64_t substeps = 0;
  double prev_goal_distance = 0.0;
  Outcome outcome = Outcome::Running;
  // Stream left after placement; the trainer draws the next episode seed
  // from it.
  Rng rng;

  double elapsed() const { return static_cast<double>(substeps) * config.physics_dt; }
  double goal_distance() const { return distance(rover.position(), goal); }

  friend bool operator==(const World&, const World&) = default;
};

Vec2 start_position(const WorldConfig& config);
double start_heading();

// Samples a fresh episode: rover at the middle of the y=0 edge facing +y, goal
// and obstacles by rejection sampling. Throws UnsatisfiableConfig when any
// placement needs more than 10,000 draws.
World generate_episode(std::uint64_t seed, const WorldConfig& config);

// Advances the pose along the exact circular arc produced by the wheel pair.
RoverPose step_physics(const RoverPose& pose, WheelCommand cmd, double dt, double v_max,
                       double track_width);

struct StepResult {
  double reward = 0.0;
  Outcome outcome = Outcome::Running;
  int substeps_run = 0;
};

// One policy decision: substeps_per_action physics substeps with a
// termination check after each. Throws ContractViolation on a terminated
// world.
StepResult control_step(World& world, WheelCommand cmd, const RewardConfig& reward);

// Collision > Fall > Success > Timeout > Running.
Outcome classify(const World& world);

// Line-oriented key=value snapshot, exact for every double.
std::string to_snapshot(const World& world);
World from_snapshot(std::string_view text);

}  // namespace svrl

#endif  // SVRL_WORLD_HPP_
