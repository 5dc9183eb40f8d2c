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

#include "svrl/svrl.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include "svrl/camera.hpp"
#include "svrl/checkpoint.hpp"
#include "svrl/config.hpp"
#include "svrl/errors.hpp"
#include "svrl/eval.hpp"
#include "svrl/image.hpp"
#include "svrl/observation.hpp"
#include "svrl/ppo.hpp"
#include "svrl/preprocess.hpp"

struct svrl_config {
  svrl::KeyValueConfig kv;
};

struct svrl_world {
  svrl::EnvSpec spec;
  svrl::World world;
  // Carried for svrl_policy_act.
  std::optional<svrl::RecurrentState> state;
  svrl::WheelCommand previous;
};

struct svrl_policy {
  svrl::PolicyNetwork net;
};

namespace {

thread_local std::string g_last_error;

struct Mismatch : svrl::Error {
  using svrl::Error::Error;
};

template <typename F>
svrl_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SVRL_OK;
  } catch (const svrl::ConfigError& e) {
    g_last_error = e.what();
    return SVRL_ERR_CONFIG;
  } catch (const svrl::IoError& e) {
    g_last_error = e.what();
    return SVRL_ERR_IO;
  } catch (const svrl::ContractViolation& e) {
    g_last_error = e.what();
    return SVRL_ERR_CONTRACT;
  } catch (const svrl::ShapeError& e) {
    g_last_error = e.what();
    return SVRL_ERR_SHAPE;
  } catch (const svrl::NumericError& e) {
    g_last_error = e.what();
    return SVRL_ERR_NUMERIC;
  } catch (const Mismatch& e) {
    g_last_error = e.what();
    return SVRL_ERR_MISMATCH;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SVRL_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SVRL_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return SVRL_ERR_RUNTIME;
  }
}

template <typename T>
void require(const T* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

void copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buffer) {
    if (capacity != 0) throw std::invalid_argument("buffer is null but capacity is non-zero");
    return;
  }
  if (capacity < text.size() + 1) throw std::invalid_argument("buffer too small");
  std::memcpy(buffer, text.c_str(), text.size() + 1);
}

svrl::RunConfig resolve(const svrl_config* config) {
  require(config, "config");
  return svrl::resolve_run_config(config->kv);
}

svrl::RgbImage camera_frame(const svrl::World& world, const svrl::EnvSpec& spec) {
  if (spec.obs.mode == svrl::ObsMode::Raw) return svrl::render_shaded(world, spec.camera);
  return svrl::render_rgb(svrl::render_segmented(world, spec.camera));
}

std::ofstream open_output(const char* path) {
  std::ofstream out(path);
  if (!out) throw svrl::IoError(std::string("cannot open '") + path + "' for writing");
  return out;
}

svrl::ControllerSpec controller_spec(const svrl::RunConfig& run, const char* controller, const svrl_policy* policy,
                                     std::uint64_t seed) {
  require(controller, "controller");
  svrl::ControllerSpec spec;
  spec.kind = svrl::parse_controller(controller);
  spec.p = run.p_controller;
  spec.stochastic = run.eval.stochastic;
  spec.seed = seed;
  if (spec.kind == svrl::ControllerKind::Ppo) {
    if (!policy) throw svrl::ConfigError("the ppo controller needs a policy checkpoint");
    spec.policy = &policy->net;
  }
  return spec;
}

svrl_outcome to_c(svrl::Outcome o) { return static_cast<svrl_outcome>(static_cast<int>(o)); }

}  // namespace

extern "C" {

SVRL_API const char* svrl_last_error(void) { return g_last_error.c_str(); }

SVRL_API const char* svrl_version(void) { return "0.1.0"; }

SVRL_API const char* svrl_status_name(svrl_status status) {
  switch (status) {
    case SVRL_OK: return "ok";
    case SVRL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SVRL_ERR_CONFIG: return "config error";
    case SVRL_ERR_RUNTIME: return "runtime error";
    case SVRL_ERR_IO: return "i/o error";
    case SVRL_ERR_CONTRACT: return "contract violation";
    case SVRL_ERR_SHAPE: return "shape error";
    case SVRL_ERR_NUMERIC: return "numeric error";
    case SVRL_ERR_MISMATCH: return "replay mismatch";
  }
  return "unknown status";
}

SVRL_API svrl_status svrl_config_create(svrl_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new svrl_config();
  });
}

SVRL_API void svrl_config_destroy(svrl_config* config) { delete config; }

SVRL_API svrl_status svrl_config_load_file(svrl_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->kv.load_file(path);
  });
}

SVRL_API svrl_status svrl_config_set(svrl_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->kv.set(key, value);
  });
}

SVRL_API svrl_status svrl_config_validate(const svrl_config* config) {
  return guarded([&] { resolve(config); });
}

SVRL_API svrl_status svrl_config_dump(const svrl_config* config, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] { copy_out(svrl::dump_run_config(resolve(config)), buffer, capacity, needed); });
}

SVRL_API svrl_status svrl_world_create(const svrl_config* config, uint64_t seed, svrl_world** out) {
  return guarded([&] {
    require(out, "out");
    const svrl::RunConfig run = resolve(config);
    auto handle = std::make_unique<svrl_world>();
    handle->spec = run.env;
    handle->world = svrl::generate_episode(seed, run.env.world);
    *out = handle.release();
  });
}

SVRL_API void svrl_world_destroy(svrl_world* world) { delete world; }

SVRL_API svrl_status svrl_world_step(svrl_world* world, double left, double right, double* reward,
                                     svrl_outcome* outcome) {
  return guarded([&] {
    require(world, "world");
    const svrl::WheelCommand cmd = svrl::WheelCommand::clamped(left, right);
    const svrl::StepResult step = svrl::control_step(world->world, cmd, world->spec.reward);
    world->previous = cmd;
    if (reward) *reward = step.reward;
    if (outcome) *outcome = to_c(step.outcome);
  });
}

SVRL_API svrl_status svrl_world_pose(const svrl_world* world, double* x, double* y, double* heading) {
  return guarded([&] {
    require(world, "world");
    if (x) *x = world->world.rover.x;
    if (y) *y = world->world.rover.y;
    if (heading) *heading = world->world.rover.heading;
  });
}

SVRL_API svrl_status svrl_world_goal(const svrl_world* world, double* x, double* y) {
  return guarded([&] {
    require(world, "world");
    if (x) *x = world->world.goal.x;
    if (y) *y = world->world.goal.y;
  });
}

SVRL_API svrl_status svrl_world_elapsed(const svrl_world* world, double* seconds) {
  return guarded([&] {
    require(world, "world");
    require(seconds, "seconds");
    *seconds = world->world.elapsed();
  });
}

SVRL_API svrl_status svrl_world_obstacle_count(const svrl_world* world, int* count) {
  return guarded([&] {
    require(world, "world");
    require(count, "count");
    *count = static_cast<int>(world->world.obstacles.size());
  });
}

SVRL_API svrl_status svrl_world_render(const svrl_world* world, uint8_t* rgb, size_t capacity, int* width,
                                       int* height) {
  return guarded([&] {
    require(world, "world");
    const svrl::RgbImage image = camera_frame(world->world, world->spec);
    if (width) *width = image.width();
    if (height) *height = image.height();
    if (!rgb) return;
    const auto& bytes = image.bytes();
    if (capacity < bytes.size()) throw std::invalid_argument("rgb buffer too small");
    std::memcpy(rgb, bytes.data(), bytes.size());
  });
}

SVRL_API svrl_status svrl_world_save_frame(const svrl_world* world, const char* path) {
  return guarded([&] {
    require(world, "world");
    require(path, "path");
    svrl::write_image(camera_frame(world->world, world->spec), path);
  });
}

SVRL_API svrl_status svrl_train(const svrl_config* config, const char* checkpoint_path, const char* log_path,
                                const char* episode_log_path, svrl_progress_fn progress, void* user,
                                svrl_policy** out) {
  return guarded([&] {
    const svrl::RunConfig run = resolve(config);
    std::ofstream log, episodes;
    if (log_path) {
      log = open_output(log_path);
      log << svrl::train_log_header() << '\n';
    }
    if (episode_log_path) {
      episodes = open_output(episode_log_path);
      episodes << svrl::episode_log_header() << '\n';
    }
    svrl::TrainOptions options;
    options.log_wallclock = run.log_wallclock;
    options.on_update = [&](const svrl::TrainRow& row) {
      if (log_path) log << svrl::train_log_row(row) << '\n' << std::flush;
      if (progress) progress(user, row.update, row.timesteps, row.mean_ep_reward);
    };
    options.on_episode = [&](const svrl::EpisodeRecord& ep, int index) {
      if (episode_log_path) episodes << svrl::episode_log_row(ep, index) << '\n';
    };
    if (checkpoint_path && run.checkpoint_every > 0) {
      options.checkpoint_every = run.checkpoint_every;
      options.on_checkpoint = [&](const svrl::PolicyNetwork& net, int update) {
        svrl::save_checkpoint(net, std::string(checkpoint_path) + "." + std::to_string(update));
      };
    }
    svrl::TrainResult result = svrl::train(run.ppo, run.env, run.net, options);
    if (log_path && !log) throw svrl::IoError(std::string("failed writing '") + log_path + "'");
    if (checkpoint_path) svrl::save_checkpoint(result.policy, checkpoint_path);
    if (out) *out = new svrl_policy{std::move(result.policy)};
  });
}

SVRL_API svrl_status svrl_policy_create(const svrl_config* config, uint64_t seed, svrl_policy** out) {
  return guarded([&] {
    require(out, "out");
    const svrl::RunConfig run = resolve(config);
    *out = new svrl_policy{svrl::PolicyNetwork(run.net, seed)};
  });
}

SVRL_API svrl_status svrl_policy_load(const char* path, svrl_policy** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new svrl_policy{svrl::load_checkpoint(path)};
  });
}

SVRL_API svrl_status svrl_policy_save(const svrl_policy* policy, const char* path) {
  return guarded([&] {
    require(policy, "policy");
    require(path, "path");
    svrl::save_checkpoint(policy->net, path);
  });
}

SVRL_API void svrl_policy_destroy(svrl_policy* policy) { delete policy; }

SVRL_API svrl_status svrl_policy_parameter_count(const svrl_policy* policy, size_t* count) {
  return guarded([&] {
    require(policy, "policy");
    require(count, "count");
    *count = policy->net.parameter_count();
  });
}

SVRL_API svrl_status svrl_policy_act(const svrl_policy* policy, svrl_world* world, double* left, double* right) {
  return guarded([&] {
    require(policy, "policy");
    require(world, "world");
    svrl::check_network_compatible(policy->net.config(), world->spec);
    if (!world->state) world->state = policy->net.initial_state();
    const svrl::Tensor obs = svrl::observe_for(policy->net.config().kind, world->world, world->spec, world->previous);
    svrl::PolicyController controller(policy->net, false, 0);
    const svrl::WheelCommand cmd = controller.act(obs, *world->state);
    if (left) *left = cmd.left;
    if (right) *right = cmd.right;
  });
}

SVRL_API svrl_status svrl_eval(const svrl_config* config, const char* controller, const svrl_policy* policy,
                               int trials, uint64_t seed, const char* trajectories_path,
                               svrl_eval_summary* summary) {
  return guarded([&] {
    const svrl::RunConfig run = resolve(config);
    const svrl::ControllerSpec spec = controller_spec(run, controller, policy, seed);
    const svrl::TrialBatch batch = svrl::run_trials(spec, run.env, trials, seed);
    if (trajectories_path) svrl::export_trajectories(batch.reports, trajectories_path);
    if (summary) {
      *summary = svrl_eval_summary{};
      std::snprintf(summary->controller, sizeof(summary->controller), "%s", batch.summary.controller.c_str());
      summary->trials = batch.summary.trials;
      summary->success = batch.summary.success;
      summary->collision = batch.summary.collision;
      summary->fall = batch.summary.fall;
      summary->timeout = batch.summary.timeout;
    }
  });
}

SVRL_API svrl_status svrl_format_summaries(const svrl_eval_summary* rows, size_t count, int csv, char* buffer,
                                           size_t capacity, size_t* needed) {
  return guarded([&] {
    if (count > 0) require(rows, "rows");
    std::vector<svrl::SummaryTable> tables;
    for (size_t i = 0; i < count; ++i) {
      svrl::SummaryTable t;
      t.controller = std::string(rows[i].controller, strnlen(rows[i].controller, sizeof(rows[i].controller)));
      t.trials = rows[i].trials;
      t.success = rows[i].success;
      t.collision = rows[i].collision;
      t.fall = rows[i].fall;
      t.timeout = rows[i].timeout;
      tables.push_back(std::move(t));
    }
    copy_out(csv ? svrl::summary_csv(tables) : svrl::format_summary_table(tables), buffer, capacity, needed);
  });
}

SVRL_API svrl_status svrl_render_episode(const svrl_config* config, const char* controller,
                                         const svrl_policy* policy, uint64_t seed, const char* directory,
                                         const char* extension, int max_frames, int* frames_written,
                                         svrl_outcome* outcome) {
  return guarded([&] {
    require(directory, "directory");
    const std::string ext = extension ? extension : "png";
    if (ext != "png" && ext != "ppm") throw svrl::ConfigError("frame format must be png or ppm, got '" + ext + "'");
    const svrl::RunConfig run = resolve(config);
    const svrl::ControllerSpec spec = controller_spec(run, controller, policy, seed);
    if (spec.policy) svrl::check_network_compatible(spec.policy->config(), run.env);
    std::filesystem::create_directories(directory);

    svrl::World world = svrl::generate_episode(seed, run.env.world);
    svrl::PController pc(spec.p);
    svrl::RandomController rc(seed);
    std::optional<svrl::PolicyController> nn;
    svrl::RecurrentState state;
    if (spec.policy) {
      nn.emplace(*spec.policy, spec.stochastic, seed);
      state = nn->initial_state();
    }
    svrl::WheelCommand previous{};
    int frames = 0;
    auto save = [&] {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%05d.%s", frames, ext.c_str());
      svrl::write_image(camera_frame(world, run.env), (std::filesystem::path(directory) / name).string());
      ++frames;
    };
    save();
    while (!svrl::is_terminal(world.outcome) && (max_frames <= 0 || frames < max_frames)) {
      svrl::WheelCommand cmd;
      switch (spec.kind) {
        case svrl::ControllerKind::Ppo:
          cmd = nn->act(svrl::observe_for(spec.policy->config().kind, world, run.env, previous), state);
          break;
        case svrl::ControllerKind::P: cmd = pc.act(world.rover, world.goal); break;
        case svrl::ControllerKind::Random: cmd = rc.act(); break;
      }
      svrl::control_step(world, cmd, run.env.reward);
      previous = cmd;
      save();
    }
    if (frames_written) *frames_written = frames;
    if (outcome) *outcome = to_c(world.outcome);
  });
}

SVRL_API svrl_status svrl_preprocess_file(const char* input_path, const char* output_path, int width, int height,
                                          int quantize) {
  return guarded([&] {
    require(input_path, "input_path");
    require(output_path, "output_path");
    const svrl::RgbImage input = svrl::read_image(input_path);
    svrl::RgbImage out = svrl::bicubic_downsample(input, width, height);
    if (quantize) out = svrl::render_rgb(svrl::class_quantize(out));
    svrl::write_image(out, output_path);
  });
}

SVRL_API svrl_status svrl_replay(const svrl_config* config, const char* trajectories_path, int* trials, int* steps) {
  return guarded([&] {
    require(trajectories_path, "trajectories_path");
    const svrl::RunConfig run = resolve(config);
    const svrl::ReplayResult result = svrl::replay_trajectories(svrl::import_trajectories(trajectories_path), run.env);
    if (trials) *trials = result.trials;
    if (steps) *steps = result.steps;
    if (!result.identical) throw Mismatch("replay diverged: " + result.first_mismatch);
  });
}

}  // extern "C"
