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

#ifndef SVRL_CONFIG_HPP_
#define SVRL_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "svrl/baselines.hpp"
#include "svrl/observation.hpp"
#include "svrl/policy.hpp"
#include "svrl/ppo.hpp"

namespace svrl {

// Flat key=value store. Files may group keys under [section] headers, which
// prefix the keys that follow ("[ppo]" + "gamma = 0.9" -> "ppo.gamma"). Later
// files and set() calls override earlier values.
class KeyValueConfig {
 public:
  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& origin = "<text>");
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct EvalConfig {
  int trials = 30;
  std::uint64_t seed = 1000;
  bool stochastic = false;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct RunConfig {
  EnvSpec env;
  NetConfig net;
  PpoConfig ppo;
  PControllerConfig p_controller;
  EvalConfig eval;
  bool log_wallclock = false;
  int checkpoint_every = 0;
};

// Defaults overlaid with every recognized key; unknown keys and malformed
// values throw ConfigError. The network input resolution follows obs.width
// and obs.height.
RunConfig resolve_run_config(const KeyValueConfig& kv);
// Every recognized key with its current value, one "key = value" per line.
std::string dump_run_config(const RunConfig& config);
std::vector<std::string> run_config_keys();

}  // namespace svrl

#endif  // SVRL_CONFIG_HPP_
