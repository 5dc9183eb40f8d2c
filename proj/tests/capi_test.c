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

/* Compiled as C to keep svrl.h consumable from plain C. */

#include <stddef.h>
#include <string.h>

#include "svrl/svrl.h"

/* Drives one P-controller-like loop through the ABI. Returns the number of
   steps taken, or -1 on any failure. */
int svrl_c_smoke(void) {
  svrl_config* config = NULL;
  svrl_world* world = NULL;
  double x = 0.0, y = 0.0, heading = 0.0, reward = 0.0;
  svrl_outcome outcome = SVRL_RUNNING;
  int steps = 0;
  if (svrl_config_create(&config) != SVRL_OK) return -1;
  if (svrl_config_set(config, "world.n_obstacles", "0") != SVRL_OK) goto fail;
  if (svrl_world_create(config, 5, &world) != SVRL_OK) goto fail;
  while (outcome == SVRL_RUNNING && steps < 1000) {
    if (svrl_world_step(world, 0.5, 0.5, &reward, &outcome) != SVRL_OK) goto fail;
    ++steps;
  }
  if (svrl_world_pose(world, &x, &y, &heading) != SVRL_OK) goto fail;
  if (strlen(svrl_last_error()) != 0) goto fail;
  svrl_world_destroy(world);
  svrl_config_destroy(config);
  return steps;
fail:
  svrl_world_destroy(world);
  svrl_config_destroy(config);
  return -1;
}
