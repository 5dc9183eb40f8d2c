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

#ifndef SVRL_EVAL_HPP_
#define SVRL_EVAL_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "svrl/baselines.hpp"
#include "svrl/observation.hpp"
#include "svrl/policy.hpp"
#include "svrl/random.hpp"
#include "svrl/world.hpp"

namespace svrl {

// Controller families differ in what they may observe, so each gets its own
// interface and the harness never hands world state to a learned policy.

// Sees only the observation tensor and its own recurrent state.
class VisuomotorController {
 public:
  virtual ~VisuomotorController() = default;
  virtual RecurrentState initial_state() const = 0;
  virtual WheelCommand act(const Tensor& observation, RecurrentState& state) = 0;
};

// Knows the rover pose and the goal location, nothing else.
class GoalSeekingController {
 public:
  virtual ~GoalSeekingController() = default;
  virtual WheelCommand act(const RoverPose& pose, Vec2 goal) = 0;
};

// Observes nothing.
class OpenLoopController {
 public:
  virtual ~OpenLoopController() = default;
  virtual WheelCommand act() = 0;
};

class PolicyController final : public VisuomotorController {
 public:
  // Mean actions unless stochastic; samples use a stream seeded by seed.
  PolicyController(const PolicyNetwork& policy, bool stochastic, std::uint64_t seed);
  RecurrentState initial_state() const override { return policy_.initial_state(); }
  WheelCommand act(const Tensor& observation, RecurrentState& state) override;
  const NetConfig& net() const { return policy_.config(); }

 private:
  const PolicyNetwork& policy_;
  bool stochastic_;
  Rng rng_;
};

class PController final : public GoalSeekingController {
 public:
  explicit PController(PControllerConfig config) : config_(config) {}
  WheelCommand act(const RoverPose& pose, Vec2 goal) override { return p_control(pose, goal, config_); }

 private:
  PControllerConfig config_;
};

class RandomController final : public OpenLoopController {
 public:
  explicit RandomController(std::uint64_t seed) : rng_(seed) {}
  WheelCommand act() override { return random_control(rng_); }

 private:
  Rng rng_;
};

enum class ControllerKind { Ppo, P, Random };
const char* controller_name(ControllerKind kind);
ControllerKind parse_controller(std::string_view name);

struct ControllerSpec {
  ControllerKind kind = ControllerKind::P;
  PControllerConfig p;
  // Required for kind == Ppo.
  const PolicyNetwork* policy = nullptr;
  bool stochastic = false;
  std::uint64_t seed = 0;
};

struct TrajectoryStep {
  // Episode clock after the step, seconds.
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double left = 0.0;
  double right = 0.0;
  double reward = 0.0;
  Outcome outcome = Outcome::Running;
};

struct TrialReport {
  int trial = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Running;
  int steps = 0;
  double total_reward = 0.0;
  double final_goal_distance = 0.0;
  std::vector<TrajectoryStep> trajectory;
};

struct SummaryTable {
  std::string controller;
  int trials = 0;
  double success = 0.0;
  double collision = 0.0;
  double fall = 0.0;
  double timeout = 0.0;
};

struct TrialBatch {
  SummaryTable summary;
  std::vector<TrialReport> reports;
};

// Trial i plays generate_episode(base_seed + i). Throws ConfigError when the
// controller cannot consume the configured observations.
TrialBatch run_trials(const ControllerSpec& controller, const EnvSpec& spec, int n_trials,
                      std::uint64_t base_seed);

// One episode with a caller-supplied controller of any family.
TrialReport run_episode(VisuomotorController& controller, NetKind kind, const EnvSpec& spec, std::uint64_t seed);
TrialReport run_episode(GoalSeekingController& controller, const EnvSpec& spec, std::uint64_t seed);
TrialReport run_episode(OpenLoopController& controller, const EnvSpec& spec, std::uint64_t seed);

SummaryTable summarize(std::string controller, const std::vector<TrialReport>& reports);

// Aligned plain-text table and a CSV variant.
std::string format_summary_table(const std::vector<SummaryTable>& rows);
std::string summary_csv(const std::vector<SummaryTable>& rows);

// CSV: trial,seed,t,x,y,heading,left,right,reward,outcome with one row per
// control step. Doubles are written with 17 significant digits so a re-read
// reproduces them exactly.
std::string trajectory_csv_header();
void write_trajectories(const std::vector<TrialReport>& reports, std::ostream& out);
void export_trajectories(const std::vector<TrialReport>& reports, const std::string& path);
std::vector<TrialReport> import_trajectories(const std::string& path);

struct ReplayResult {
  bool identical = true;
  int trials = 0;
  int steps = 0;
  std::string first_mismatch;
};

// Re-simulates every recorded command sequence from its seed and compares
// poses, rewards and outcomes bit for bit.
ReplayResult replay_trajectories(const std::vector<TrialReport>& reports, const EnvSpec& spec);

}  // namespace svrl

#endif  // SVRL_EVAL_HPP_
