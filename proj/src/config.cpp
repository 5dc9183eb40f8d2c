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

#include "svrl/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "svrl/errors.hpp"

namespace svrl {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || errno == ERANGE)
    throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  // Accept integral values written in float notation such as 2e5.
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 9.0e15)
    throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + text + "'");
}

std::string show(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Binding {
  const char* key;
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SVRL_DOUBLE(KEY, FIELD)                                                                          \
  Binding { KEY, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_double(k, v); }, \
            [](const RunConfig& c) { return show(c.FIELD); } }
#define SVRL_INT(KEY, FIELD, TYPE)                                                                        \
  Binding { KEY,                                                                                         \
            [](RunConfig& c, const std::string& k, const std::string& v) {                               \
              c.FIELD = static_cast<TYPE>(parse_int(k, v));                                               \
            },                                                                                           \
            [](const RunConfig& c) { return std::to_string(c.FIELD); } }
#define SVRL_BOOL(KEY, FIELD)                                                                            \
  Binding { KEY, [](RunConfig& c, const std::string& k, const std::string& v) { c.FIELD = parse_bool(k, v); }, \
            [](const RunConfig& c) { return std::string(c.FIELD ? "true" : "false"); } }

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = {
      SVRL_DOUBLE("world.map_side", env.world.map_side),
      SVRL_INT("world.n_obstacles", env.world.n_obstacles, int),
      SVRL_DOUBLE("world.goal_min_dist", env.world.goal_min_dist),
      SVRL_DOUBLE("world.goal_edge_margin", env.world.goal_edge_margin),
      SVRL_DOUBLE("world.obstacle_min_dist_from_start", env.world.obstacle_min_dist_from_start),
      SVRL_DOUBLE("world.collision_radius", env.world.collision_radius),
      SVRL_DOUBLE("world.win_radius", env.world.win_radius),
      SVRL_DOUBLE("world.max_episode_time", env.world.max_episode_time),
      SVRL_DOUBLE("world.v_max", env.world.v_max),
      SVRL_DOUBLE("world.track_width", env.world.track_width),
      SVRL_DOUBLE("world.physics_dt", env.world.physics_dt),
      SVRL_INT("world.substeps_per_action", env.world.substeps_per_action, int),
      SVRL_DOUBLE("world.obstacle_radius_min", env.world.obstacle_radius_min),
      SVRL_DOUBLE("world.obstacle_radius_max", env.world.obstacle_radius_max),
      SVRL_DOUBLE("reward.c_veloc", env.reward.c_veloc),
      SVRL_DOUBLE("reward.c_crash", env.reward.c_crash),
      SVRL_DOUBLE("reward.c_fall", env.reward.c_fall),
      SVRL_DOUBLE("reward.c_timeout", env.reward.c_timeout),
      SVRL_INT("camera.width", env.camera.width, int),
      SVRL_INT("camera.height", env.camera.height, int),
      SVRL_DOUBLE("camera.horizontal_fov", env.camera.horizontal_fov_deg),
      SVRL_DOUBLE("camera.near_clip", env.camera.near_clip),
      SVRL_DOUBLE("camera.far_clip", env.camera.far_clip),
      SVRL_DOUBLE("camera.mount_height", env.camera.mount_height),
      SVRL_DOUBLE("camera.pitch", env.camera.pitch),
      Binding{"obs.mode",
              [](RunConfig& c, const std::string&, const std::string& v) { c.env.obs.mode = parse_obs_mode(v); },
              [](const RunConfig& c) { return std::string(obs_mode_name(c.env.obs.mode)); }},
      SVRL_INT("obs.width", env.obs.width, int),
      SVRL_INT("obs.height", env.obs.height, int),
      SVRL_BOOL("obs.requantize", env.obs.requantize),
      Binding{"net.kind",
              [](RunConfig& c, const std::string&, const std::string& v) { c.net.kind = parse_net_kind(v); },
              [](const RunConfig& c) { return std::string(net_kind_name(c.net.kind)); }},
      SVRL_INT("net.conv1_filters", net.conv1_filters, int),
      SVRL_INT("net.conv2_filters", net.conv2_filters, int),
      SVRL_INT("net.dense_units", net.dense_units, int),
      SVRL_INT("net.lstm_units", net.lstm_units, int),
      SVRL_INT("net.mlp_hidden", net.mlp_hidden, int),
      SVRL_DOUBLE("net.log_std_init", net.log_std_init),
      SVRL_INT("ppo.total_timesteps", ppo.total_timesteps, std::int64_t),
      SVRL_DOUBLE("ppo.learning_rate", ppo.learning_rate),
      SVRL_DOUBLE("ppo.gamma", ppo.gamma),
      SVRL_DOUBLE("ppo.ent_coef", ppo.ent_coef),
      SVRL_INT("ppo.n_epochs", ppo.n_epochs, int),
      SVRL_DOUBLE("ppo.clip_range", ppo.clip_range),
      SVRL_INT("ppo.n_steps", ppo.n_steps, int),
      SVRL_DOUBLE("ppo.gae_lambda", ppo.gae_lambda),
      SVRL_DOUBLE("ppo.vf_coef", ppo.vf_coef),
      SVRL_INT("ppo.n_minibatches", ppo.n_minibatches, int),
      SVRL_DOUBLE("ppo.max_grad_norm", ppo.max_grad_norm),
      SVRL_INT("ppo.seed", ppo.seed, std::uint64_t),
      SVRL_INT("ppo.n_envs", ppo.n_envs, int),
      SVRL_BOOL("ppo.normalize_advantages", ppo.normalize_advantages),
      SVRL_DOUBLE("p_controller.k_p", p_controller.k_p),
      SVRL_DOUBLE("p_controller.p_0", p_controller.p_0),
      SVRL_INT("eval.trials", eval.trials, int),
      SVRL_INT("eval.seed", eval.seed, std::uint64_t),
      SVRL_BOOL("eval.stochastic", eval.stochastic),
      SVRL_BOOL("train.log_wallclock", log_wallclock),
      SVRL_INT("train.checkpoint_every", checkpoint_every, int),
  };
  return table;
}

#undef SVRL_DOUBLE
#undef SVRL_INT
#undef SVRL_BOOL

}  // namespace

void KeyValueConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  load_text(buffer.str(), path);
}

void KeyValueConfig::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    set(section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)));
  }
}

void KeyValueConfig::set(const std::string& key, const std::string& value) { values_[key] = value; }

const std::string& KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

RunConfig resolve_run_config(const KeyValueConfig& kv) {
  RunConfig config;
  const auto& table = bindings();
  for (const auto& [key, value] : kv.values()) {
    auto it = std::find_if(table.begin(), table.end(), [&key](const Binding& b) { return key == b.key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(config, key, value);
  }
  config.net.obs_channels = 3;
  config.net.obs_width = config.env.obs.width;
  config.net.obs_height = config.env.obs.height;
  config.env.validate();
  config.net.validate();
  config.ppo.validate();
  config.p_controller.validate();
  if (config.eval.trials < 1) throw ConfigError("eval.trials must be at least 1");
  if (config.checkpoint_every < 0) throw ConfigError("train.checkpoint_every must be non-negative");
  return config;
}

std::string dump_run_config(const RunConfig& config) {
  std::ostringstream out;
  for (const Binding& b : bindings()) out << b.key << " = " << b.get(config) << '\n';
  return out.str();
}

std::vector<std::string> run_config_keys() {
  std::vector<std::string> keys;
  for (const Binding& b : bindings()) keys.emplace_back(b.key);
  return keys;
}

}  // namespace svrl
