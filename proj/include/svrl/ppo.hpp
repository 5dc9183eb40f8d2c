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

#ifndef SVRL_PPO_HPP_
#define SVRL_PPO_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "svrl/observation.hpp"
#include "svrl/optim.hpp"
#include "svrl/policy.hpp"
#include "svrl/random.hpp"
#include "svrl/world.hpp"

namespace svrl {

struct PpoConfig {
  std::int64_t total_timesteps = 200000;
  double learning_rate = 0.0003;
  double gamma = 0.85;
  double ent_coef = 0.01;
  int n_epochs = 4;
  double clip_range = 0.2;
  int n_steps = 64;
  double gae_lambda = 0.95;
  double vf_coef = 0.5;
  int n_minibatches = 1;
  double max_grad_norm = 0.5;
  std::uint64_t seed = 1;
  int n_envs = 4;
  bool normalize_advantages = true;

  // Hyperparameters of the original 5e6-step run.
  static PpoConfig paper_preset();
  void validate() const;
  friend bool operator==(const PpoConfig&, const PpoConfig&) = default;
};

struct Transition {
  Tensor observation;
  // State fed to the network together with observation.
  RecurrentState state;
  // Unclamped Gaussian sample; the env actuated command.
  ActionVec action{};
  WheelCommand command;
  double reward = 0.0;
  bool done = false;
  double value = 0.0;
  double log_prob = 0.0;
  std::uint64_t episode_seed = 0;
  int episode_step = 0;
};

struct EpisodeRecord {
  int env = 0;
  std::uint64_t seed = 0;
  int steps = 0;
  double total_reward = 0.0;
  Outcome outcome = Outcome::Running;
};

// One environment with automatic episode resets.
struct EnvSlot {
  World world;
  RecurrentState state;
  WheelCommand previous;
  double episode_reward = 0.0;
  int episode_steps = 0;
};

std::vector<EnvSlot> make_envs(const EnvSpec& spec, const PolicyNetwork& policy, int n_envs,
                               std::uint64_t base_seed);

// Transitions are stored env-major: steps[env * n_steps + t].
struct RolloutBuffer {
  int n_steps = 0;
  int n_envs = 0;
  std::vector<Transition> steps;
  std::vector<double> bootstrap_values;
  std::vector<double> advantages;
  std::vector<double> returns;
  std::vector<EpisodeRecord> finished;

  const Transition& at(int env, int t) const { return steps[static_cast<std::size_t>(env) * n_steps + t]; }
};

// Runs the acting policy for n_steps in every env. Terminated episodes are
// replaced by fresh worlds seeded from the finished world's stream, with the
// recurrent state zeroed.
RolloutBuffer collect_rollout(std::vector<EnvSlot>& envs, const EnvSpec& spec, const PolicyNetwork& policy,
                              int n_steps, Rng& rng);

struct Advantages {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t, A_t = delta_t + gamma lambda
// (1 - done_t) A_{t+1}, returns = A + V. Throws ShapeError on length mismatch.
Advantages compute_gae(std::span<const double> rewards, std::span<const double> values,
                       std::span<const bool> dones, double bootstrap_value, double gamma, double lambda);

// Fills buffer.advantages and buffer.returns per env.
void compute_buffer_advantages(RolloutBuffer& buffer, double gamma, double lambda);

struct PpoSample {
  const Tensor* observation = nullptr;
  const RecurrentState* state = nullptr;
  ActionVec action{};
  double old_log_prob = 0.0;
  double advantage = 0.0;
  double ret = 0.0;
};

// min(r A, clip(r, 1 - eps, 1 + eps) A) and its derivative with respect to r.
struct SurrogateTerm {
  double value = 0.0;
  double d_ratio = 0.0;
  bool clipped = false;
};
SurrogateTerm clipped_surrogate(double ratio, double advantage, double clip_range);

struct LossResult {
  double loss = 0.0;
  // -mean(min(...)).
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  TensorList gradients;
  // d loss / d log_prob_i; exactly zero for clipped samples.
  std::vector<double> log_prob_coeff;
  std::vector<double> ratios;
};

// loss = -L_clip + vf_coef * mean((V - R)^2) - ent_coef * mean(H). Throws
// NumericError when the loss or gradients are not finite.
LossResult ppo_loss(const PolicyNetwork& policy, std::span<const PpoSample> batch, double clip_range,
                    double vf_coef, double ent_coef, bool normalize_advantages = true);

struct TrainRow {
  int update = 0;
  std::int64_t timesteps = 0;
  double mean_ep_reward = 0.0;
  int success = 0;
  int collision = 0;
  int fall = 0;
  int timeout = 0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double wallclock_s = 0.0;
};

struct TrainLog {
  std::vector<TrainRow> rows;
  std::vector<EpisodeRecord> episodes;
};

std::string train_log_header();
std::string train_log_row(const TrainRow& row);
std::string episode_log_header();
std::string episode_log_row(const EpisodeRecord& episode, int index);

struct TrainOptions {
  // Measured wall-clock seconds go into TrainRow::wallclock_s only when set;
  // otherwise the column stays 0 and the log is reproducible byte for byte.
  bool log_wallclock = false;
  std::function<void(const TrainRow&)> on_update;
  std::function<void(const EpisodeRecord&, int index)> on_episode;
  // Called with the network after every checkpoint_every updates (0 = never).
  int checkpoint_every = 0;
  std::function<void(const PolicyNetwork&, int update)> on_checkpoint;
};

struct TrainResult {
  PolicyNetwork policy;
  TrainLog log;
};

TrainResult train(const PpoConfig& ppo, const EnvSpec& spec, const NetConfig& net,
                  const TrainOptions& options = {});

}  // namespace svrl

#endif  // SVRL_PPO_HPP_
