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

#include "svrl/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svrl/errors.hpp"

namespace svrl {
namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Roots of a t^2 + b t + c = 0 in ascending order; false when none are real.
bool solve_quadratic(double a, double b, double c, double& t0, double& t1) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0 || a == 0.0) return false;
  const double s = std::sqrt(disc);
  // Numerically stable form.
  const double q = b >= 0.0 ? -0.5 * (b + s) : -0.5 * (b - s);
  t0 = q / a;
  t1 = q != 0.0 ? c / q : t0;
  if (t0 > t1) std::swap(t0, t1);
  return true;
}

class Tracer {
 public:
  Tracer(const World& world, const CameraConfig& cam) : world_(world), cam_(cam) {}

  PixelHit trace(Vec3 origin, Vec3 dir) const {
    PixelHit best;
    double best_t = std::numeric_limits<double>::infinity();
    auto accept = [&](double t, SemanticClass cls, Vec3 normal) {
      if (t < cam_.near_clip || t > cam_.far_clip || t >= best_t) return;
      best_t = t;
      best.cls = cls;
      best.depth = t;
      best.nx = normal.x;
      best.ny = normal.y;
      best.nz = normal.z;
    };

    if (dir.z < 0.0) accept(-origin.z / dir.z, SemanticClass::Ground, {0.0, 0.0, 1.0});

    for (const Obstacle& rock : world_.obstacles) {
      // Spheres rest on the ground plane.
      const Vec3 center{rock.center.x, rock.center.y, rock.radius};
      const Vec3 oc = origin - center;
      double t0, t1;
      if (!solve_quadratic(dot(dir, dir), 2.0 * dot(dir, oc), dot(oc, oc) - rock.radius * rock.radius,
                           t0, t1))
        continue;
      for (double t : {t0, t1}) {
        if (t < cam_.near_clip) continue;
        const Vec3 p = origin + t * dir;
        accept(t, SemanticClass::Rock, (1.0 / rock.radius) * (p - center));
        break;
      }
    }

    // Goal beacon: upright capped cylinder standing on the ground.
    const Vec2 g = world_.goal;
    const double ox = origin.x - g.x, oy = origin.y - g.y;
    double t0, t1;
    if (solve_quadratic(dir.x * dir.x + dir.y * dir.y, 2.0 * (dir.x * ox + dir.y * oy),
                        ox * ox + oy * oy - kGoalBeaconRadius * kGoalBeaconRadius, t0, t1)) {
      for (double t : {t0, t1}) {
        const double z = origin.z + t * dir.z;
        if (z < 0.0 || z > kGoalBeaconHeight) continue;
        const double px = ox + t * dir.x, py = oy + t * dir.y;
        accept(t, SemanticClass::Goal, {px / kGoalBeaconRadius, py / kGoalBeaconRadius, 0.0});
      }
    }
    if (dir.z != 0.0) {
      const double t = (kGoalBeaconHeight - origin.z) / dir.z;
      const double px = ox + t * dir.x, py = oy + t * dir.y;
      if (px * px + py * py <= kGoalBeaconRadius * kGoalBeaconRadius)
        accept(t, SemanticClass::Goal, {0.0, 0.0, dir.z < 0.0 ? 1.0 : -1.0});
    }
    return best;
  }

 private:
  const World& world_;
  const CameraConfig& cam_;
};

}  // namespace

void CameraConfig::validate() const {
  if (width < 4 || height < 4) throw ConfigError("camera resolution must be at least 4x4");
  if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0))
    throw ConfigError("camera horizontal_fov must lie in (0, 180) degrees");
  if (!(near_clip > 0.0 && near_clip < far_clip))
    throw ConfigError("camera clip planes must satisfy 0 < near < far");
  if (!(mount_height > 0.0)) throw ConfigError("camera mount_height must be positive");
}

double CameraConfig::vertical_fov_deg() const {
  const double half = std::tan(deg_to_rad(horizontal_fov_deg) / 2.0) * height / width;
  return 2.0 * std::atan(half) * 180.0 / std::numbers::pi;
}

std::vector<PixelHit> raycast(const World& world, const CameraConfig& cam) {
  cam.validate();
  const double heading = world.rover.heading;
  const Vec3 forward{std::cos(heading) * std::cos(cam.pitch), std::sin(heading) * std::cos(cam.pitch),
                     std::sin(cam.pitch)};
  const Vec3 right{std::sin(heading), -std::cos(heading), 0.0};
  const Vec3 up = cross(right, forward);
  const Vec3 origin{world.rover.x, world.rover.y, cam.mount_height};
  const double half_w = std::tan(deg_to_rad(cam.horizontal_fov_deg) / 2.0);
  const double half_h = half_w * cam.height / cam.width;

  const Tracer tracer(world, cam);
  std::vector<PixelHit> hits(static_cast<std::size_t>(cam.width) * cam.height);
  for (int row = 0; row < cam.height; ++row) {
    const double sy = (1.0 - 2.0 * (row + 0.5) / cam.height) * half_h;
    for (int col = 0; col < cam.width; ++col) {
      const double sx = (2.0 * (col + 0.5) / cam.width - 1.0) * half_w;
      // The forward component of dir is 1, so the ray parameter is the depth.
      const Vec3 dir = forward + sx * right + sy * up;
      hits[static_cast<std::size_t>(row) * cam.width + col] = tracer.trace(origin, dir);
    }
  }
  return hits;
}

ClassImage render_segmented(const World& world, const CameraConfig& cam) {
  const std::vector<PixelHit> hits = raycast(world, cam);
  ClassImage image(cam.width, cam.height);
  for (int row = 0; row < cam.height; ++row)
    for (int col = 0; col < cam.width; ++col)
      image.set(col, row, hits[static_cast<std::size_t>(row) * cam.width + col].cls);
  return image;
}

RgbImage render_rgb(const ClassImage& image) {
  RgbImage out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) out.set(x, y, palette_color(image.at(x, y)));
  return out;
}

RgbImage render_shaded(const World& world, const CameraConfig& cam) {
  const std::vector<PixelHit> hits = raycast(world, cam);
  const Vec3 light = [] {
    const Vec3 l{0.35, -0.25, 0.9};
    return (1.0 / std::sqrt(dot(l, l))) * l;
  }();
  constexpr double kAmbient = 0.25;
  constexpr double kFog = 0.06;

  RgbImage out(cam.width, cam.height);
  for (int row = 0; row < cam.height; ++row) {
    // Sky: dark blue fading to black toward the top, red channel always 0.
    const auto sky_blue = static_cast<std::uint8_t>(std::lround(8.0 + 32.0 * (row + 0.5) / cam.height));
    for (int col = 0; col < cam.width; ++col) {
      const PixelHit& hit = hits[static_cast<std::size_t>(row) * cam.width + col];
      if (hit.cls == SemanticClass::Space) {
        out.set(col, row, {0, 0, sky_blue});
        continue;
      }
      Vec3 albedo{};
      switch (hit.cls) {
        case SemanticClass::Ground: albedo = {0.62, 0.62, 0.62}; break;
        case SemanticClass::Rock: albedo = {0.58, 0.40, 0.30}; break;
        case SemanticClass::Goal: albedo = {0.25, 0.45, 0.95}; break;
        case SemanticClass::Space: break;
      }
      const double lambert = std::max(0.0, hit.nx * light.x + hit.ny * light.y + hit.nz * light.z);
      const double intensity = (kAmbient + (1.0 - kAmbient) * lambert) / (1.0 + kFog * hit.depth);
      auto to_byte = [intensity](double a, int floor) {
        const long v = std::lround(255.0 * std::clamp(a * intensity, 0.0, 1.0));
        return static_cast<std::uint8_t>(std::max<long>(v, floor));
      };
      out.set(col, row, {to_byte(albedo.x, 1), to_byte(albedo.y, 0), to_byte(albedo.z, 0)});
    }
  }
  return out;
}

}  // namespace svrl
