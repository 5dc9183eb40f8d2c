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

#ifndef SVRL_OBSERVATION_HPP_
#define SVRL_OBSERVATION_HPP_

#include <string_view>

#include "svrl/camera.hpp"
#include "svrl/image.hpp"
#include "svrl/policy.hpp"
#include "svrl/tensor.hpp"
#include "svrl/world.hpp"

namespace svrl {

enum class ObsMode { Segmented, Raw };

const char* obs_mode_name(ObsMode mode);
ObsMode parse_obs_mode(std::string_view name);

// Policy-input resolution and pipeline options. The camera renders at its own
// resolution; when that is larger the frame is bicubic-downsampled to
// width x height.
struct ObservationConfig {
  ObsMode mode = ObsMode::Segmented;
  int width = 48;
  int height = 27;
  // Segmented mode: snap the downsampled frame back onto the palette.
  bool requantize = true;

  void validate(const CameraConfig& camera) const;
  friend bool operator==(const ObservationConfig&, const ObservationConfig&) = default;
};

// Everything needed to turn a World into what a controller sees and to step it.
struct EnvSpec {
  WorldConfig world;
  RewardConfig reward;
  CameraConfig camera{48, 27};
  ObservationConfig obs;

  void validate() const;
};

// Render -> (downsample) -> (re-quantize) as an 8-bit frame.
RgbImage observation_frame(const World& world, const CameraConfig& camera, const ObservationConfig& obs);
// Channel-major (3, height, width) tensor in [0, 1].
Tensor observe_image(const World& world, const CameraConfig& camera, const ObservationConfig& obs);

inline constexpr int kProprioceptiveSize = 7;
// (bearing/pi, distance/map_side, heading/pi, x/map_side, y/map_side,
//  previous left, previous right) for the MLP variant.
Tensor observe_proprioceptive(const World& world, WheelCommand previous);

// Observation for a network family: images for the CNN variants, the
// proprioceptive vector for the MLP.
Tensor observe_for(NetKind kind, const World& world, const EnvSpec& spec, WheelCommand previous);

// Throws ConfigError when the network cannot consume what spec produces.
void check_network_compatible(const NetConfig& net, const EnvSpec& spec);

}  // namespace svrl

#endif  // SVRL_OBSERVATION_HPP_
