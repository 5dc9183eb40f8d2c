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

#ifndef SVRL_CAMERA_HPP_
#define SVRL_CAMERA_HPP_

#include <vector>

#include "svrl/image.hpp"
#include "svrl/world.hpp"

namespace svrl {

// Pinhole camera rigidly mounted on the rover. Clip distances are depths along
// the optical axis, as with an OpenGL perspective frustum.
struct CameraConfig {
  int width = 1920;
  int height = 1080;
  double horizontal_fov_deg = 69.4;
  double near_clip = 0.01;
  double far_clip = 20.0;
  double mount_height = 0.25;
  // Positive pitch tilts the optical axis up.
  double pitch = 0.0;

  void validate() const;
  double vertical_fov_deg() const;

  friend bool operator==(const CameraConfig&, const CameraConfig&) = default;
};

inline constexpr double kGoalBeaconRadius = 0.3;
inline constexpr double kGoalBeaconHeight = 1.0;

// Result of the nearest-hit query for one pixel. depth is the optical-axis
// depth of the hit, or 0 for Space.
struct PixelHit {
  SemanticClass cls = SemanticClass::Space;
  double depth = 0.0;
  // Unit surface normal at the hit.
  double nx = 0.0, ny = 0.0, nz = 0.0;
};

// Per-pixel raycast shared by the segmented and shaded renderers.
std::vector<PixelHit> raycast(const World& world, const CameraConfig& cam);

ClassImage render_segmented(const World& world, const CameraConfig& cam);
RgbImage render_rgb(const ClassImage& image);
// "Raw" observation: Lambertian shading with distance fog over the same
// raycast. Sky pixels carry a zero red channel and every surface hit a
// non-zero one, so the hit mask is recoverable from the pixels.
RgbImage render_shaded(const World& world, const CameraConfig& cam);

}  // namespace svrl

#endif  // SVRL_CAMERA_HPP_
