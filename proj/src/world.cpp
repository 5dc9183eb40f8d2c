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

#include "svrl/world.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include "svrl/errors.hpp"

namespace svrl {
namespace {

constexpr int kMaxPlacementAttempts = 10000;
constexpr double kStraightLineOmega = 1e-9;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double wrap_angle(double radians) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(radians, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

void WorldConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid world config: ") + what);
  };
  require(map_side > 0.0, "map_side must be positive");
  require(n_obstacles >= 0, "n_obstacles must be non-negative");
  require(goal_min_dist > 0.0, "goal_min_dist must be positive");
  require(goal_min_dist < map_side * std::numbers::sqrt2, "goal_min_dist exceeds the map diagonal");
  require(goal_edge_margin >= 0.0 && 2.0 * goal_edge_margin < map_side, "goal_edge_margin out of range");
  require(obstacle_min_dist_from_start > 0.0, "obstacle_min_dist_from_start must be positive");
  require(collision_radius > 0.0, "collision_radius must be positive");
  require(win_radius > 0.0, "win_radius must be positive");
  require(collision_radius < obstacle_min_dist_from_start,
          "collision_radius must be below obstacle_min_dist_from_start");
  require(max_episode_time > 0.0, "max_episode_time must be positive");
  require(v_max > 0.0, "v_max must be positive");
  require(track_width > 0.0, "track_width must be positive");
  require(physics_dt > 0.0, "physics_dt must be positive");
  require(substeps_per_action >= 1, "substeps_per_action must be at least 1");
  require(obstacle_radius_min > 0.0 && obstacle_radius_min <= obstacle_radius_max,
          "obstacle radius range must be positive and ordered");
}

int WorldConfig::max_control_steps() const {
  return static_cast<int>(std::ceil(max_episode_time / (physics_dt * substeps_per_action) - 1e-9));
}

void RewardConfig::validate() const {
  if (c_veloc < 0.0 || c_crash < 0.0 || c_fall < 0.0 || c_timeout < 0.0)
    throw ConfigError("invalid reward config: weights must be non-negative");
}

const char* outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Running: return "Running";
    case Outcome::Success: return "Success";
    case Outcome::Collision: return "Collision";
    case Outcome::Fall: return "Fall";
    case Outcome::Timeout: return "Timeout";
  }
  return "Running";
}

Outcome parse_outcome(std::string_view name) {
  for (Outcome o : {Outcome::Running, Outcome::Success, Outcome::Collision, Outcome::Fall,
                    Outcome::Timeout}) {
    if (name == outcome_name(o)) return o;
  }
  throw ConfigError("unknown outcome '" + std::string(name) + "'");
}

WheelCommand WheelCommand::clamped(double left, double right) {
  auto clamp01 = [](double v) { return v > 0.0 ? (v < 1.0 ? v : 1.0) : 0.0; };
  return {clamp01(left), clamp01(right)};
}

Vec2 start_position(const WorldConfig& config) { return {config.map_side / 2.0, 0.0}; }

double start_heading() { return std::numbers::pi / 2.0; }

World generate_episode(std::uint64_t seed, const WorldConfig& config) {
  config.validate();
  World world;
  world.config = config;
  world.seed = seed;
  world.rng = Rng(seed);
  const Vec2 start = start_position(config);
  world.rover = {start.x, start.y, start_heading()};

  Rng& rng = world.rng;
  const double lo = config.goal_edge_margin;
  const double hi = config.map_side - config.goal_edge_margin;
  bool placed = false;
  for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
    Vec2 goal{rng.uniform(lo, hi), rng.uniform(lo, hi)};
    if (distance(goal, start) >= config.goal_min_dist) {
      world.goal = goal;
      placed = true;
    }
  }
  if (!placed) throw UnsatisfiableConfig("could not place the goal within 10000 attempts");

  const double keep_out = config.win_radius + config.collision_radius;
  for (int i = 0; i < config.n_obstacles; ++i) {
    placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      Vec2 center{rng.uniform(0.0, config.map_side), rng.uniform(0.0, config.map_side)};
      if (distance(center, start) >= config.obstacle_min_dist_from_start &&
          distance(center, world.goal) >= keep_out) {
        const double radius = rng.uniform(config.obstacle_radius_min, config.obstacle_radius_max);
        world.obstacles.push_back({center, radius});
        placed = true;
      }
    }
    if (!placed) throw UnsatisfiableConfig("could not place obstacle " + std::to_string(i));
  }

  world.prev_goal_distance = distance(start, world.goal);
  return world;
}

RoverPose step_physics(const RoverPose& pose, WheelCommand cmd, double dt, double v_max,
                       double track_width) {
  const double v = v_max * (cmd.left + cmd.right) / 2.0;
  const double omega = v_max * (cmd.right - cmd.left) / track_width;
  RoverPose next = pose;
  if (std::abs(omega) < kStraightLineOmega) {
    next.x += v * dt * std::cos(pose.heading);
    next.y += v * dt * std::sin(pose.heading);
  } else {
    const double radius = v / omega;
    const double heading = pose.heading + omega * dt;
    next.x += radius * (std::sin(heading) - std::sin(pose.heading));
    next.y -= radius * (std::cos(heading) - std::cos(pose.heading));
    next.heading = wrap_angle(heading);
  }
  return next;
}

Outcome classify(const World& world) {
  const WorldConfig& c = world.config;
  const Vec2 p = world.rover.position();
  for (const Obstacle& o : world.obstacles) {
    if (distance(p, o.center) < c.collision_radius) return Outcome::Collision;
  }
  if (p.x < 0.0 || p.x > c.map_side || p.y < 0.0 || p.y > c.map_side) return Outcome::Fall;
  if (distance(p, world.goal) < c.win_radius) return Outcome::Success;
  // The substep clock is an integer count; the epsilon absorbs the
  // count * dt product landing one ulp short of the limit.
  if (world.elapsed() >= c.max_episode_time - 1e-9) return Outcome::Timeout;
  return Outcome::Running;
}

StepResult control_step(World& world, WheelCommand cmd, const RewardConfig& reward) {
  if (is_terminal(world.outcome))
    throw ContractViolation("control_step on a terminated world (outcome " +
                            std::string(outcome_name(world.outcome)) + ")");
  const WorldConfig& c = world.config;
  cmd = WheelCommand::clamped(cmd.left, cmd.right);

  StepResult result;
  for (int s = 0; s < c.substeps_per_action; ++s) {
    world.rover = step_physics(world.rover, cmd, c.physics_dt, c.v_max, c.track_width);
    ++world.substeps;
    ++result.substeps_run;
    result.outcome = classify(world);
    if (is_terminal(result.outcome)) break;
  }

  const double new_distance = world.goal_distance();
  result.reward = reward.c_veloc * (world.prev_goal_distance - new_distance);
  switch (result.outcome) {
    case Outcome::Collision: result.reward -= reward.c_crash; break;
    case Outcome::Fall: result.reward -= reward.c_fall; break;
    case Outcome::Timeout: result.reward -= reward.c_timeout; break;
    default: break;
  }
  world.prev_goal_distance = new_distance;
  world.outcome = result.outcome;
  return result;
}

std::string to_snapshot(const World& world) {
  const WorldConfig& c = world.config;
  std::ostringstream out;
  auto put = [&out](const std::string& key, const std::string& value) {
    out << key << '=' << value << '\n';
  };
  auto putd = [&put](const std::string& key, double value) { put(key, format_double(value)); };
  put("seed", std::to_string(world.seed));
  putd("config.map_side", c.map_side);
  put("config.n_obstacles", std::to_string(c.n_obstacles));
  putd("config.goal_min_dist", c.goal_min_dist);
  putd("config.goal_edge_margin", c.goal_edge_margin);
  putd("config.obstacle_min_dist_from_start", c.obstacle_min_dist_from_start);
  putd("config.collision_radius", c.collision_radius);
  putd("config.win_radius", c.win_radius);
  putd("config.max_episode_time", c.max_episode_time);
  putd("config.v_max", c.v_max);
  putd("config.track_width", c.track_width);
  putd("config.physics_dt", c.physics_dt);
  put("config.substeps_per_action", std::to_string(c.substeps_per_action));
  putd("config.obstacle_radius_min", c.obstacle_radius_min);
  putd("config.obstacle_radius_max", c.obstacle_radius_max);
  putd("rover.x", world.rover.x);
  putd("rover.y", world.rover.y);
  putd("rover.heading", world.rover.heading);
  putd("goal.x", world.goal.x);
  putd("goal.y", world.goal.y);
  put("obstacles.count", std::to_string(world.obstacles.size()));
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    const std::string prefix = "obstacle." + std::to_string(i) + ".";
    putd(prefix + "x", world.obstacles[i].center.x);
    putd(prefix + "y", world.obstacles[i].center.y);
    putd(prefix + "radius", world.obstacles[i].radius);
  }
  put("substeps", std::to_string(world.substeps));
  putd("elapsed", world.elapsed());
  putd("prev_goal_distance", world.prev_goal_distance);
  put("outcome", outcome_name(world.outcome));
  put("rng_state", world.rng.state());
  return out.str();
}

World from_snapshot(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("snapshot line without '=': " + line);
    fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&fields](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("snapshot missing field '" + key + "'");
    return it->second;
  };
  auto getd = [&get](const std::string& key) {
    const std::string& s = get(key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ConfigError("snapshot field '" + key + "' is not a number");
    return v;
  };
  auto geti = [&get](const std::string& key) {
    const std::string& s = get(key);
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw ConfigError("snapshot field '" + key + "' is not an integer");
    return v;
  };

  World world;
  world.seed = std::stoull(get("seed"));
  WorldConfig& c = world.config;
  c.map_side = getd("config.map_side");
  c.n_obstacles = static_cast<int>(geti("config.n_obstacles"));
  c.goal_min_dist = getd("config.goal_min_dist");
  c.goal_edge_margin = getd("config.goal_edge_margin");
  c.obstacle_min_dist_from_start = getd("config.obstacle_min_dist_from_start");
  c.collision_radius = getd("config.collision_radius");
  c.win_radius = getd("config.win_radius");
  c.max_episode_time = getd("config.max_episode_time");
  c.v_max = getd("config.v_max");
  c.track_width = getd("config.track_width");
  c.physics_dt = getd("config.physics_dt");
  c.substeps_per_action = static_cast<int>(geti("config.substeps_per_action"));
  c.obstacle_radius_min = getd("config.obstacle_radius_min");
  c.obstacle_radius_max = getd("config.obstacle_radius_max");
  c.validate();
  world.rover = {getd("rover.x"), getd("rover.y"), getd("rover.heading")};
  world.goal = {getd("goal.x"), getd("goal.y")};
  const long long count = geti("obstacles.count");
  if (count != c.n_obstacles) throw ConfigError("snapshot obstacle count disagrees with config");
  for (long long i = 0; i < count; ++i) {
    const std::string prefix = "obstacle." + std::to_string(i) + ".";
    world.obstacles.push_back({{getd(prefix + "x"), getd(prefix + "y")}, getd(prefix + "radius")});
  }
  world.substeps = geti("substeps");
  world.prev_goal_distance = getd("prev_goal_distance");
  world.outcome = parse_outcome(get("outcome"));
  world.rng.set_state(get("rng_state"));
  return world;
}

}  // namespace svrl
