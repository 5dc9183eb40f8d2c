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

#include "svrl/observation.hpp"

#include <numbers>
#include <string>

#include "svrl/baselines.hpp"
#include "svrl/errors.hpp"
#include "svrl/preprocess.hpp"

namespace svrl {

const char* obs_mode_name(ObsMode mode) { return mode == ObsMode::Raw ? "raw" : "segmented"; }

ObsMode parse_obs_mode(std::string_view name) {
  if (name == "segmented") return ObsMode::Segmented;
  if (name == "raw") return ObsMode::Raw;
  throw ConfigError("unknown observation mode '" + std::string(name) + "' (expected segmented or raw)");
}

void ObservationConfig::validate(const CameraConfig& camera) const {
  if (width < 1 || height < 1) throw ConfigError("observation resolution must be positive");
  if (width > camera.width || height > camera.height)
    throw ConfigError("observation resolution exceeds the camera resolution");
}

void EnvSpec::validate() const {
  world.validate();
  reward.validate();
  camera.validate();
  obs.validate(camera);
}

RgbImage observation_frame(const World& world, const CameraConfig& camera, const ObservationConfig& obs) {
  const bool resize = camera.width != obs.width || camera.height != obs.height;
  if (obs.mode == ObsMode::Raw) {
    RgbImage shaded = render_shaded(world, camera);
    return resize ? bicubic_downsample(shaded, obs.width, obs.height) : shaded;
  }
  RgbImage frame = render_rgb(render_segmented(world, camera));
  if (!resize) return frame;
  frame = bicubic_downsample(frame, obs.width, obs.height);
  return obs.requantize ? render_rgb(class_quantize(frame)) : frame;
}

Tensor observe_image(const World& world, const CameraConfig& camera, const ObservationConfig& obs) {
  return to_tensor(observation_frame(world, camera, obs), obs.width, obs.height);
}

Tensor observe_proprioceptive(const World& world, WheelCommand previous) {
  const double side = world.config.map_side;
  const double pi = std::numbers::pi;
  return Tensor({static_cast<std::size_t>(kProprioceptiveSize)},
                {goal_bearing_error(world.rover, world.goal) / pi, world.goal_distance() / side,
                 world.rover.heading / pi, world.rover.x / side, world.rover.y / side, previous.left,
                 previous.right});
}

Tensor observe_for(NetKind kind, const World& world, const EnvSpec& spec, WheelCommand previous) {
  if (kind == NetKind::Mlp) return observe_proprioceptive(world, previous);
  return observe_image(world, spec.camera, spec.obs);
}

void check_network_compatible(const NetConfig& net, const EnvSpec& spec) {
  if (net.kind == NetKind::Mlp) {
    if (net.mlp_inputs != kProprioceptiveSize)
      throw ConfigError("mlp network expects " + std::to_string(net.mlp_inputs) +
                        " inputs but the proprioceptive vector has " + std::to_string(kProprioceptiveSize));
    return;
  }
  if (net.obs_channels != 3 || net.obs_width != spec.obs.width || net.obs_height != spec.obs.height)
    throw ConfigError("network input " + std::to_string(net.obs_width) + "x" + std::to_string(net.obs_height) +
                      " does not match observation " + std::to_string(spec.obs.width) + "x" +
                      std::to_string(spec.obs.height));
}

}  // namespace svrl
