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

#ifndef SVRL_SVRL_H_
#define SVRL_SVRL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SVRL_BUILDING_LIBRARY)
#define SVRL_API __attribute__((visibility("default")))
#else
#define SVRL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum svrl_status {
  SVRL_OK = 0,
  SVRL_ERR_INVALID_ARGUMENT = 1,  // null handle, bad enum, buffer too small
  SVRL_ERR_CONFIG = 2,
  SVRL_ERR_RUNTIME = 3,
  SVRL_ERR_IO = 4,
  SVRL_ERR_CONTRACT = 5,  // e.g. stepping a terminated world
  SVRL_ERR_SHAPE = 6,
  SVRL_ERR_NUMERIC = 7,
  SVRL_ERR_MISMATCH = 8  // replay diverged from the recording
} svrl_status;

// Matches the core outcome enumeration.
typedef enum svrl_outcome {
  SVRL_RUNNING = 0,
  SVRL_SUCCESS = 1,
  SVRL_COLLISION = 2,
  SVRL_FALL = 3,
  SVRL_TIMEOUT = 4
} svrl_outcome;

typedef struct svrl_config svrl_config;
typedef struct svrl_world svrl_world;
typedef struct svrl_policy svrl_policy;

// Message of the last failed call on this thread; "" after a success.
SVRL_API const char* svrl_last_error(void);
SVRL_API const char* svrl_version(void);
SVRL_API const char* svrl_status_name(svrl_status status);

// Build-up of a run configuration from files and overrides. Values are only
// checked when the configuration is resolved (any call taking a config).
SVRL_API svrl_status svrl_config_create(svrl_config** out);
SVRL_API void svrl_config_destroy(svrl_config* config);
SVRL_API svrl_status svrl_config_load_file(svrl_config* config, const char* path);
SVRL_API svrl_status svrl_config_set(svrl_config* config, const char* key, const char* value);
SVRL_API svrl_status svrl_config_validate(const svrl_config* config);
// Resolved "key = value" listing. Writes at most capacity bytes including the
// terminator; *needed receives the full size.
SVRL_API svrl_status svrl_config_dump(const svrl_config* config, char* buffer, size_t capacity,
                                      size_t* needed);

SVRL_API svrl_status svrl_world_create(const svrl_config* config, uint64_t seed, svrl_world** out);
SVRL_API void svrl_world_destroy(svrl_world* world);
SVRL_API svrl_status svrl_world_step(svrl_world* world, double left, double right, double* reward,
                                     svrl_outcome* outcome);
SVRL_API svrl_status svrl_world_pose(const svrl_world* world, double* x, double* y, double* heading);
SVRL_API svrl_status svrl_world_goal(const svrl_world* world, double* x, double* y);
SVRL_API svrl_status svrl_world_elapsed(const svrl_world* world, double* seconds);
SVRL_API svrl_status svrl_world_obstacle_count(const svrl_world* world, int* count);
// Camera image in the configured observation mode at camera resolution;
// rgb must hold width*height*3 bytes.
SVRL_API svrl_status svrl_world_render(const svrl_world* world, uint8_t* rgb, size_t capacity, int* width,
                                       int* height);
SVRL_API svrl_status svrl_world_save_frame(const svrl_world* world, const char* path);

typedef void (*svrl_progress_fn)(void* user, int update, int64_t timesteps, double mean_episode_reward);

// Trains a PPO policy. log_path and checkpoint_path may be NULL; out may be
// NULL when the caller only wants the files.
SVRL_API svrl_status svrl_train(const svrl_config* config, const char* checkpoint_path, const char* log_path,
                                const char* episode_log_path, svrl_progress_fn progress, void* user,
                                svrl_policy** out);
SVRL_API svrl_status svrl_policy_create(const svrl_config* config, uint64_t seed, svrl_policy** out);
SVRL_API svrl_status svrl_policy_load(const char* path, svrl_policy** out);
SVRL_API svrl_status svrl_policy_save(const svrl_policy* policy, const char* path);
SVRL_API void svrl_policy_destroy(svrl_policy* policy);
SVRL_API svrl_status svrl_policy_parameter_count(const svrl_policy* policy, size_t* count);
// Mean action for the world's current observation; advances the recurrent
// state the world carries for this purpose.
SVRL_API svrl_status svrl_policy_act(const svrl_policy* policy, svrl_world* world, double* left,
                                     double* right);

typedef struct svrl_eval_summary {
  char controller[16];
  int trials;
  double success;  // percent of trials
  double collision;
  double fall;
  double timeout;
} svrl_eval_summary;

// controller is "ppo", "p" or "random"; policy is required for "ppo" only.
// Trial i uses world seed seed + i. trajectories_path may be NULL.
SVRL_API svrl_status svrl_eval(const svrl_config* config, const char* controller, const svrl_policy* policy,
                               int trials, uint64_t seed, const char* trajectories_path,
                               svrl_eval_summary* summary);
// Aligned text table (csv == 0) or CSV of several summaries.
SVRL_API svrl_status svrl_format_summaries(const svrl_eval_summary* rows, size_t count, int csv, char* buffer,
                                           size_t capacity, size_t* needed);

// Runs one episode and writes a frame per control step into directory as
// frame_NNNNN.<extension> ("png" or "ppm"). max_frames <= 0 means no limit.
SVRL_API svrl_status svrl_render_episode(const svrl_config* config, const char* controller,
                                         const svrl_policy* policy, uint64_t seed, const char* directory,
                                         const char* extension, int max_frames, int* frames_written,
                                         svrl_outcome* outcome);

// Downsamples an image file; quantize != 0 snaps pixels to the palette.
SVRL_API svrl_status svrl_preprocess_file(const char* input_path, const char* output_path, int width,
                                          int height, int quantize);

// Re-simulates recorded trajectories. SVRL_ERR_MISMATCH when any step differs.
SVRL_API svrl_status svrl_replay(const svrl_config* config, const char* trajectories_path, int* trials,
                                 int* steps);

#ifdef __cplusplus
}
#endif

#endif  // SVRL_SVRL_H_
