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

#include "svrl/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>

#include "svrl/errors.hpp"

namespace svrl {
namespace {

// splitmix64 finalizer; decorrelates the seed used for the network, the
// sampling stream and the environments.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

PpoConfig PpoConfig::paper_preset() {
  PpoConfig c;
  c.total_timesteps = 5000000;
  return c;
}

void PpoConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid ppo config: ") + what);
  };
  require(total_timesteps >= 0, "total_timesteps must be non-negative");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  require(gae_lambda >= 0.0 && gae_lambda <= 1.0, "gae_lambda must lie in [0, 1]");
  require(clip_range > 0.0, "clip_range must be positive");
  require(ent_coef >= 0.0 && vf_coef >= 0.0, "loss coefficients must be non-negative");
  require(n_epochs >= 1, "n_epochs must be at least 1");
  require(n_steps >= 1 && n_envs >= 1, "n_steps and n_envs must be at least 1");
  require(n_minibatches >= 1 && (n_steps * n_envs) % n_minibatches == 0,
          "n_minibatches must divide n_steps * n_envs");
  require(max_grad_norm > 0.0, "max_grad_norm must be positive");
}

std::vector<EnvSlot> make_envs(const EnvSpec& spec, const PolicyNetwork& policy, int n_envs,
                               std::uint64_t base_seed) {
  std::vector<EnvSlot> envs(n_envs);
  for (int i = 0; i < n_envs; ++i) {
    envs[i].world = generate_episode(base_seed + static_cast<std::uint64_t>(i), spec.world);
    envs[i].state = policy.initial_state();
  }
  return envs;
}

RolloutBuffer collect_rollout(std::vector<EnvSlot>& envs, const EnvSpec& spec, const PolicyNetwork& policy,
                              int n_steps, Rng& rng) {
  const NetKind kind = policy.config().kind;
  RolloutBuffer buffer;
  buffer.n_steps = n_steps;
  buffer.n_envs = static_cast<int>(envs.size());
  buffer.steps.resize(envs.size() * static_cast<std::size_t>(n_steps));

  for (int t = 0; t < n_steps; ++t) {
    for (std::size_t e = 0; e < envs.size(); ++e) {
      EnvSlot& env = envs[e];
      Transition& tr = buffer.steps[e * n_steps + t];
      tr.observation = observe_for(kind, env.world, spec, env.previous);
      tr.state = env.state;
      const PolicyOutput out = policy.forward(tr.observation, env.state);
      for (int k = 0; k < kActionDim; ++k) tr.action[k] = out.mean[k] + std::exp(out.log_std[k]) * rng.normal();
      tr.log_prob = gaussian_log_prob(out.mean, out.log_std, tr.action);
      tr.value = out.value;
      tr.command = WheelCommand::clamped(tr.action[0], tr.action[1]);
      tr.episode_seed = env.world.seed;
      tr.episode_step = env.episode_steps;

      const StepResult step = control_step(env.world, tr.command, spec.reward);
      tr.reward = step.reward;
      tr.done = is_terminal(step.outcome);
      env.episode_reward += step.reward;
      ++env.episode_steps;
      if (tr.done) {
        buffer.finished.push_back(
            {static_cast<int>(e), env.world.seed, env.episode_steps, env.episode_reward, step.outcome});
        const std::uint64_t next_seed = env.world.rng.next_u64();
        env.world = generate_episode(next_seed, spec.world);
        env.state = policy.initial_state();
        env.previous = {};
        env.episode_reward = 0.0;
        env.episode_steps = 0;
      } else {
        env.state = out.state;
        env.previous = tr.command;
      }
    }
  }

  buffer.bootstrap_values.resize(envs.size());
  for (std::size_t e = 0; e < envs.size(); ++e) {
    const Tensor obs = observe_for(kind, envs[e].world, spec, envs[e].previous);
    buffer.bootstrap_values[e] = policy.forward(obs, envs[e].state).value;
  }
  return buffer;
}

Advantages compute_gae(std::span<const double> rewards, std::span<const double> values,
                       std::span<const bool> dones, double bootstrap_value, double gamma, double lambda) {
  if (rewards.size() != values.size() || rewards.size() != dones.size())
    throw ShapeError("compute_gae: rewards, values and dones must have equal length");
  const std::size_t n = rewards.size();
  Advantages out{std::vector<double>(n), std::vector<double>(n)};
  double next_advantage = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double next_value = i + 1 < n ? values[i + 1] : bootstrap_value;
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * not_done - values[i];
    next_advantage = delta + gamma * lambda * not_done * next_advantage;
    out.advantages[i] = next_advantage;
    out.returns[i] = next_advantage + values[i];
  }
  return out;
}

void compute_buffer_advantages(RolloutBuffer& buffer, double gamma, double lambda) {
  const std::size_t n = static_cast<std::size_t>(buffer.n_steps);
  buffer.advantages.resize(buffer.steps.size());
  buffer.returns.resize(buffer.steps.size());
  std::vector<double> rewards(n), values(n);
  std::unique_ptr<bool[]> dones(new bool[n]);
  for (int e = 0; e < buffer.n_envs; ++e) {
    for (std::size_t t = 0; t < n; ++t) {
      const Transition& tr = buffer.at(e, static_cast<int>(t));
      rewards[t] = tr.reward;
      values[t] = tr.value;
      dones[t] = tr.done;
    }
    const Advantages adv =
        compute_gae(rewards, values, std::span<const bool>(dones.get(), n), buffer.bootstrap_values[e], gamma,
                    lambda);
    std::copy(adv.advantages.begin(), adv.advantages.end(), buffer.advantages.begin() + e * n);
    std::copy(adv.returns.begin(), adv.returns.end(), buffer.returns.begin() + e * n);
  }
}

SurrogateTerm clipped_surrogate(double ratio, double advantage, double clip_range) {
  const double unclipped = ratio * advantage;
  const double bounded = std::clamp(ratio, 1.0 - clip_range, 1.0 + clip_range) * advantage;
  if (unclipped <= bounded) return {unclipped, advantage, false};
  return {bounded, 0.0, true};
}

LossResult ppo_loss(const PolicyNetwork& policy, std::span<const PpoSample> batch, double clip_range,
                    double vf_coef, double ent_coef, bool normalize_advantages) {
  if (batch.empty()) throw ShapeError("ppo_loss: empty batch");
  const double n = static_cast<double>(batch.size());

  std::vector<double> adv(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) adv[i] = batch[i].advantage;
  if (normalize_advantages) {
    const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double std_dev = std::sqrt(var / n);
    for (double& a : adv) a = (a - mean) / (std_dev + 1e-8);
  }

  LossResult result;
  result.gradients = zeros_like(policy.parameters());
  result.log_prob_coeff.resize(batch.size());
  result.ratios.resize(batch.size());
  double surrogate = 0.0, value_loss = 0.0, entropy = 0.0;
  int clipped = 0;
  ForwardCache cache;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PpoSample& s = batch[i];
    const PolicyOutput out = policy.forward(*s.observation, *s.state, &cache);
    const double log_prob = gaussian_log_prob(out.mean, out.log_std, s.action);
    const double ratio = std::exp(log_prob - s.old_log_prob);
    const SurrogateTerm term = clipped_surrogate(ratio, adv[i], clip_range);
    surrogate += term.value;
    clipped += term.clipped ? 1 : 0;
    const double value_error = out.value - s.ret;
    value_loss += value_error * value_error;
    entropy += gaussian_entropy(out.log_std);

    // d(-surrogate/n)/d log_prob = -(d surrogate/d ratio) * ratio / n.
    const double coeff = term.d_ratio == 0.0 ? 0.0 : -term.d_ratio * ratio / n;
    result.log_prob_coeff[i] = coeff;
    result.ratios[i] = ratio;
    ActionVec d_mean{}, d_log_std{};
    if (coeff != 0.0) {
      ActionVec g_mean, g_log_std;
      gaussian_log_prob_grad(out.mean, out.log_std, s.action, g_mean, g_log_std);
      for (int k = 0; k < kActionDim; ++k) {
        d_mean[k] = coeff * g_mean[k];
        d_log_std[k] = coeff * g_log_std[k];
      }
    }
    for (int k = 0; k < kActionDim; ++k) d_log_std[k] -= ent_coef / n;
    const double d_value = vf_coef * 2.0 * value_error / n;
    policy.backward_accumulate(cache, d_mean, d_log_std, d_value, result.gradients);
  }

  result.policy_loss = -surrogate / n;
  result.value_loss = value_loss / n;
  result.entropy = entropy / n;
  result.clip_fraction = clipped / n;
  result.loss = result.policy_loss + vf_coef * result.value_loss - ent_coef * result.entropy;

  if (!std::isfinite(result.loss))
    throw NumericError("ppo_loss: non-finite loss (policy " + format_number(result.policy_loss) + ", value " +
                       format_number(result.value_loss) + ", entropy " + format_number(result.entropy) + ")");
  for (const NamedTensor& g : result.gradients)
    if (!g.tensor.all_finite()) throw NumericError("ppo_loss: non-finite gradient in " + g.name);
  return result;
}

std::string train_log_header() {
  return "update_index,timesteps,mean_ep_reward,success,collision,fall,timeout,policy_loss,value_loss,entropy,"
         "wallclock_s";
}

std::string train_log_row(const TrainRow& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", r.wallclock_s);
  return std::to_string(r.update) + "," + std::to_string(r.timesteps) + "," + format_number(r.mean_ep_reward) +
         "," + std::to_string(r.success) + "," + std::to_string(r.collision) + "," + std::to_string(r.fall) +
         "," + std::to_string(r.timeout) + "," + format_number(r.policy_loss) + "," +
         format_number(r.value_loss) + "," + format_number(r.entropy) + "," + buf;
}

std::string episode_log_header() { return "episode,env,seed,steps,total_reward,outcome"; }

std::string episode_log_row(const EpisodeRecord& ep, int index) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", ep.total_reward);
  return std::to_string(index) + "," + std::to_string(ep.env) + "," + std::to_string(ep.seed) + "," +
         std::to_string(ep.steps) + "," + buf + "," + outcome_name(ep.outcome);
}

TrainResult train(const PpoConfig& ppo, const EnvSpec& spec, const NetConfig& net, const TrainOptions& options) {
  ppo.validate();
  spec.validate();
  check_network_compatible(net, spec);

  TrainResult result{PolicyNetwork(net, mix_seed(ppo.seed)), {}};
  PolicyNetwork& policy = result.policy;
  AdamState adam = AdamState::for_parameters(policy.parameters());
  Rng rng(mix_seed(ppo.seed ^ 0x5EEDull));
  std::vector<EnvSlot> envs = make_envs(spec, policy, ppo.n_envs, ppo.seed);

  const auto started = std::chrono::steady_clock::now();
  const std::int64_t per_update = static_cast<std::int64_t>(ppo.n_steps) * ppo.n_envs;
  const std::size_t minibatch = static_cast<std::size_t>(per_update / ppo.n_minibatches);
  std::int64_t timesteps = 0;
  int update = 0;
  std::vector<std::size_t> order(static_cast<std::size_t>(per_update));

  while (timesteps < ppo.total_timesteps) {
    RolloutBuffer buffer = collect_rollout(envs, spec, policy, ppo.n_steps, rng);
    timesteps += per_update;
    compute_buffer_advantages(buffer, ppo.gamma, ppo.gae_lambda);

    std::vector<PpoSample> samples(buffer.steps.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Transition& tr = buffer.steps[i];
      samples[i] = {&tr.observation, &tr.state, tr.action, tr.log_prob, buffer.advantages[i], buffer.returns[i]};
    }

    TrainRow row;
    int passes = 0;
    std::vector<PpoSample> batch(minibatch);
    for (int epoch = 0; epoch < ppo.n_epochs; ++epoch) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      // Fisher-Yates with the library generator; std::shuffle is not portable.
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.next_u64() % i)]);
      for (int mb = 0; mb < ppo.n_minibatches; ++mb) {
        for (std::size_t k = 0; k < minibatch; ++k) batch[k] = samples[order[mb * minibatch + k]];
        LossResult loss = ppo_loss(policy, batch, ppo.clip_range, ppo.vf_coef, ppo.ent_coef,
                                   ppo.normalize_advantages);
        clip_grad_norm(loss.gradients, ppo.max_grad_norm);
        adam_step(policy.mutable_parameters(), loss.gradients, adam, ppo.learning_rate);
        row.policy_loss += loss.policy_loss;
        row.value_loss += loss.value_loss;
        row.entropy += loss.entropy;
        ++passes;
      }
    }

    row.update = update;
    row.timesteps = timesteps;
    row.policy_loss /= passes;
    row.value_loss /= passes;
    row.entropy /= passes;
    double reward_sum = 0.0;
    for (const EpisodeRecord& ep : buffer.finished) {
      reward_sum += ep.total_reward;
      switch (ep.outcome) {
        case Outcome::Success: ++row.success; break;
        case Outcome::Collision: ++row.collision; break;
        case Outcome::Fall: ++row.fall; break;
        case Outcome::Timeout: ++row.timeout; break;
        case Outcome::Running: break;
      }
      if (options.on_episode) options.on_episode(ep, static_cast<int>(result.log.episodes.size()));
      result.log.episodes.push_back(ep);
    }
    row.mean_ep_reward = buffer.finished.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                 : reward_sum / static_cast<double>(buffer.finished.size());
    if (options.log_wallclock)
      row.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.log.rows.push_back(row);
    if (options.on_update) options.on_update(row);
    ++update;
    if (options.checkpoint_every > 0 && options.on_checkpoint && update % options.checkpoint_every == 0)
      options.on_checkpoint(policy, update);
  }
  return result;
}

}  // namespace svrl
