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

#ifndef SVRL_IMAGE_HPP_
#define SVRL_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace svrl {

enum class SemanticClass : std::uint8_t { Ground = 0, Rock = 1, Goal = 2, Space = 3 };

inline constexpr std::array<SemanticClass, 4> kAllClasses = {
    SemanticClass::Ground, SemanticClass::Rock, SemanticClass::Goal, SemanticClass::Space};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Fixed palette: Ground (64,64,64), Rock (255,0,0), Goal (0,0,255), Space (0,0,0).
Rgb palette_color(SemanticClass c);
const char* class_name(SemanticClass c);

// Row-major grid of semantic labels.
class ClassImage {
 public:
  ClassImage() = default;
  ClassImage(int width, int height, SemanticClass fill = SemanticClass::Space);

  int width() const { return width_; }
  int height() const { return height_; }
  SemanticClass at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, SemanticClass c) { pixels_[index(x, y)] = c; }
  const std::vector<SemanticClass>& pixels() const { return pixels_; }

  std::array<std::size_t, 4> histogram() const;

  friend bool operator==(const ClassImage&, const ClassImage&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<SemanticClass> pixels_;
};

// Interleaved 8-bit RGB, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  std::uint8_t channel(int x, int y, int ch) const { return bytes_[index(x, y) + ch]; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y) const { return (static_cast<std::size_t>(y) * width_ + x) * 3; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// Binary PPM (P6) and 8-bit RGB PNG. Format is chosen from the extension
// (.png, otherwise PPM). Throws IoError.
void write_image(const RgbImage& image, const std::string& path);
RgbImage read_image(const std::string& path);
void write_ppm(const RgbImage& image, const std::string& path);
RgbImage read_ppm(const std::string& path);
void write_png(const RgbImage& image, const std::string& path);
RgbImage read_png(const std::string& path);

}  // namespace svrl

#endif  // SVRL_IMAGE_HPP_
