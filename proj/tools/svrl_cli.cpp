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

// Command-line front end. Talks to the library only through svrl.h.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svrl/svrl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// Thrown to unwind with an exit code once the library reported a failure.
struct Failure {
  int code;
};

void check(svrl_status status) {
  if (status == SVRL_OK) return;
  std::cerr << "svrl: " << svrl_status_name(status) << ": " << svrl_last_error() << '\n';
  const bool config = status == SVRL_ERR_CONFIG || status == SVRL_ERR_INVALID_ARGUMENT;
  throw Failure{config ? kExitConfig : kExitRuntime};
}

struct ConfigDeleter {
  void operator()(svrl_config* c) const { svrl_config_destroy(c); }
};
struct PolicyDeleter {
  void operator()(svrl_policy* p) const { svrl_policy_destroy(p); }
};
using ConfigPtr = std::unique_ptr<svrl_config, ConfigDeleter>;
using PolicyPtr = std::unique_ptr<svrl_policy, PolicyDeleter>;

struct Common {
  std::vector<std::string> configs;
  std::vector<std::string> sets;
  std::string obs;
  std::string net;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, Common& c, bool with_net) {
  cmd->add_option("--config", c.configs, "key=value config file (repeatable, later files win)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "override one config key, e.g. --set ppo.gamma=0.9");
  cmd->add_option("--obs", c.obs, "observation mode")->check(CLI::IsMember({"segmented", "raw"}));
  if (with_net) cmd->add_option("--net", c.net, "network")->check(CLI::IsMember({"cnn", "cnn-lstm", "mlp"}));
  cmd->add_option("--seed", c.seed, "seed")->check(CLI::NonNegativeNumber);
}

ConfigPtr build_config(const Common& c) {
  svrl_config* raw = nullptr;
  check(svrl_config_create(&raw));
  ConfigPtr config(raw);
  for (const auto& path : c.configs) check(svrl_config_load_file(config.get(), path.c_str()));
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "svrl: --set expects key=value, got '" << kv << "'\n";
      throw Failure{kExitConfig};
    }
    check(svrl_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  if (!c.obs.empty()) check(svrl_config_set(config.get(), "obs.mode", c.obs.c_str()));
  if (!c.net.empty()) check(svrl_config_set(config.get(), "net.kind", c.net.c_str()));
  return config;
}

void set_number(svrl_config* config, const char* key, std::int64_t value) {
  check(svrl_config_set(config, key, std::to_string(value).c_str()));
}

PolicyPtr load_policy(const std::string& path) {
  svrl_policy* raw = nullptr;
  check(svrl_policy_load(path.c_str(), &raw));
  return PolicyPtr(raw);
}

std::string format_rows(const std::vector<svrl_eval_summary>& rows, bool csv) {
  std::size_t needed = 0;
  check(svrl_format_summaries(rows.data(), rows.size(), csv, nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(svrl_format_summaries(rows.data(), rows.size(), csv, text.data(), text.size(), &needed));
  text.resize(needed - 1);
  return text;
}

std::int64_t config_int(svrl_config* config, const std::string& key) {
  std::size_t needed = 0;
  check(svrl_config_dump(config, nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(svrl_config_dump(config, text.data(), text.size(), &needed));
  const std::string prefix = key + " = ";
  const auto at = text.find(prefix);
  return std::stoll(text.substr(at + prefix.size()));
}

void report_progress(void*, int update, std::int64_t timesteps, double mean_reward) {
  if (update % 10 != 0) return;
  std::fprintf(stderr, "update %d  timesteps %lld  mean_ep_reward %.2f\n", update,
               static_cast<long long>(timesteps), mean_reward);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svrl: visuomotor rover navigation with PPO"};
  app.require_subcommand(1);
  app.set_version_flag("--version", svrl_version());

  Common common;

  auto* train = app.add_subcommand("train", "train a PPO policy");
  add_common(train, common, true);
  std::int64_t total_timesteps = -1;
  std::string checkpoint_out = "policy.svrl", log_out = "train_log.csv", episodes_out;
  bool quiet = false;
  train->add_option("--total-timesteps", total_timesteps, "environment steps to train for")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--out", checkpoint_out, "checkpoint path")->capture_default_str();
  train->add_option("--log", log_out, "per-update CSV log")->capture_default_str();
  train->add_option("--episodes-log", episodes_out, "per-episode CSV log");
  train->add_flag("--quiet", quiet, "no progress on stderr");

  auto* eval = app.add_subcommand("eval", "run evaluation trials");
  add_common(eval, common, true);
  std::vector<std::string> controllers{"p"};
  int trials = -1;
  std::string checkpoint_in, trajectories_out;
  eval->add_option("--controller", controllers, "ppo, p or random (comma separated for several)")
      ->delimiter(',')
      ->check(CLI::IsMember({"ppo", "p", "random"}));
  eval->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
  eval->add_option("--checkpoint", checkpoint_in, "policy checkpoint for the ppo controller");
  eval->add_option("--trajectories", trajectories_out, "write trajectory CSV (single controller only)");

  auto* render = app.add_subcommand("render", "dump camera frames of one episode");
  add_common(render, common, true);
  std::string render_controller = "p", render_dir = "frames", render_format = "png", render_checkpoint;
  int frames = 0, width = 0, height = 0;
  render->add_option("--controller", render_controller, "driver")->check(CLI::IsMember({"ppo", "p", "random"}));
  render->add_option("--checkpoint", render_checkpoint, "policy checkpoint for the ppo controller");
  render->add_option("--out", render_dir, "output directory")->capture_default_str();
  render->add_option("--format", render_format, "png or ppm")->capture_default_str()->check(CLI::IsMember({"png", "ppm"}));
  render->add_option("--frames", frames, "stop after this many frames (0: whole episode)");
  render->add_option("--width", width, "camera width")->check(CLI::PositiveNumber);
  render->add_option("--height", height, "camera height")->check(CLI::PositiveNumber);

  auto* prep = app.add_subcommand("preprocess", "downsample an image, optionally snapping to the palette");
  std::string prep_in, prep_out, prep_mode = "segmented";
  int prep_width = 48, prep_height = 27;
  prep->add_option("input", prep_in, "input PPM or PNG")->required()->check(CLI::ExistingFile);
  prep->add_option("output", prep_out, "output PPM or PNG")->required();
  prep->add_option("--width", prep_width, "output width")->capture_default_str()->check(CLI::PositiveNumber);
  prep->add_option("--height", prep_height, "output height")->capture_default_str()->check(CLI::PositiveNumber);
  prep->add_option("--obs", prep_mode, "segmented re-quantizes to the palette")->capture_default_str()
      ->check(CLI::IsMember({"segmented", "raw"}));

  auto* replay = app.add_subcommand("replay", "re-simulate a trajectory CSV and check it is bit-identical");
  add_common(replay, common, false);
  std::string replay_in;
  replay->add_option("trajectories", replay_in, "CSV written by eval --trajectories")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "svrl: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*train) {
      ConfigPtr config = build_config(common);
      if (common.seed >= 0) set_number(config.get(), "ppo.seed", common.seed);
      if (total_timesteps >= 0) set_number(config.get(), "ppo.total_timesteps", total_timesteps);
      check(svrl_config_validate(config.get()));
      check(svrl_train(config.get(), checkpoint_out.c_str(), log_out.empty() ? nullptr : log_out.c_str(),
                       episodes_out.empty() ? nullptr : episodes_out.c_str(), quiet ? nullptr : report_progress,
                       nullptr, nullptr));
      std::cout << "wrote " << checkpoint_out << '\n';
    } else if (*eval) {
      ConfigPtr config = build_config(common);
      if (common.seed >= 0) set_number(config.get(), "eval.seed", common.seed);
      if (trials > 0) set_number(config.get(), "eval.trials", trials);
      check(svrl_config_validate(config.get()));
      if (!trajectories_out.empty() && controllers.size() != 1) {
        std::cerr << "svrl: --trajectories needs exactly one --controller\n";
        return kExitConfig;
      }
      PolicyPtr policy;
      if (!checkpoint_in.empty()) policy = load_policy(checkpoint_in);
      const int n = static_cast<int>(config_int(config.get(), "eval.trials"));
      const auto seed = static_cast<std::uint64_t>(config_int(config.get(), "eval.seed"));
      std::vector<svrl_eval_summary> rows;
      for (const auto& name : controllers) {
        svrl_eval_summary row{};
        check(svrl_eval(config.get(), name.c_str(), policy.get(), n, seed,
                        trajectories_out.empty() ? nullptr : trajectories_out.c_str(), &row));
        rows.push_back(row);
      }
      std::cout << format_rows(rows, false) << '\n' << format_rows(rows, true);
    } else if (*render) {
      ConfigPtr config = build_config(common);
      if (width > 0) set_number(config.get(), "camera.width", width);
      if (height > 0) set_number(config.get(), "camera.height", height);
      check(svrl_config_validate(config.get()));
      PolicyPtr policy;
      if (!render_checkpoint.empty()) policy = load_policy(render_checkpoint);
      const auto seed = static_cast<std::uint64_t>(common.seed >= 0 ? common.seed : 0);
      int written = 0;
      svrl_outcome outcome = SVRL_RUNNING;
      check(svrl_render_episode(config.get(), render_controller.c_str(), policy.get(), seed, render_dir.c_str(),
                                render_format.c_str(), frames, &written, &outcome));
      static const char* const kOutcomes[] = {"running", "success", "collision", "fall", "timeout"};
      std::cout << "wrote " << written << " frames to " << render_dir << " (" << kOutcomes[outcome] << ")\n";
    } else if (*prep) {
      check(svrl_preprocess_file(prep_in.c_str(), prep_out.c_str(), prep_width, prep_height,
                                 prep_mode == "segmented"));
    } else if (*replay) {
      ConfigPtr config = build_config(common);
      int n_trials = 0, n_steps = 0;
      check(svrl_replay(config.get(), replay_in.c_str(), &n_trials, &n_steps));
      std::cout << "replay identical: " << n_trials << " trials, " << n_steps << " steps\n";
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitOk;
}
