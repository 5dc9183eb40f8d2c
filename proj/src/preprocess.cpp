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

#include "svrl/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svrl/errors.hpp"

namespace svrl {

double BicubicKernel::weight(double offset) const {
  const double x = std::abs(offset);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

std::array<double, 4> BicubicKernel::taps(double position, int& first_tap) const {
  const double base = std::floor(position);
  first_tap = static_cast<int>(base) - 1;
  const double frac = position - base;
  return {weight(frac + 1.0), weight(frac), weight(1.0 - frac), weight(2.0 - frac)};
}

double source_coordinate(int out_index, int in_size, int out_size) {
  return (out_index + 0.5) * static_cast<double>(in_size) / out_size - 0.5;
}

namespace {

struct AxisTaps {
  std::vector<std::array<int, 4>> index;
  std::vector<std::array<double, 4>> weight;
};

AxisTaps axis_taps(int in_size, int out_size, const BicubicKernel& kernel) {
  AxisTaps taps;
  taps.index.resize(out_size);
  taps.weight.resize(out_size);
  for (int o = 0; o < out_size; ++o) {
    int first = 0;
    taps.weight[o] = kernel.taps(source_coordinate(o, in_size, out_size), first);
    for (int k = 0; k < 4; ++k) taps.index[o][k] = std::clamp(first + k, 0, in_size - 1);
  }
  return taps;
}

}  // namespace

ResampledImage bicubic_resample(const RgbImage& image, int out_width, int out_height,
                                const BicubicKernel& kernel) {
  if (out_width < 1 || out_height < 1)
    throw ConfigError("downsample target must be at least 1x1");
  if (out_width > image.width() || out_height > image.height())
    throw ConfigError("bicubic_downsample only reduces resolution (requested " +
                      std::to_string(out_width) + "x" + std::to_string(out_height) + " from " +
                      std::to_string(image.width()) + "x" + std::to_string(image.height()) + ")");

  const AxisTaps cols = axis_taps(image.width(), out_width, kernel);
  const AxisTaps rows = axis_taps(image.height(), out_height, kernel);
  const auto& src = image.bytes();
  const std::size_t in_stride = static_cast<std::size_t>(image.width()) * 3;

  // Horizontal pass over every source row, then vertical pass.
  std::vector<double> horizontal(static_cast<std::size_t>(image.height()) * out_width * 3);
  for (int y = 0; y < image.height(); ++y) {
    const std::uint8_t* row = src.data() + y * in_stride;
    double* dst = horizontal.data() + static_cast<std::size_t>(y) * out_width * 3;
    for (int ox = 0; ox < out_width; ++ox) {
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += cols.weight[ox][k] * row[cols.index[ox][k] * 3 + ch];
        dst[ox * 3 + ch] = acc;
      }
    }
  }

  ResampledImage out{out_width, out_height,
                     std::vector<double>(static_cast<std::size_t>(out_width) * out_height * 3)};
  const std::size_t mid_stride = static_cast<std::size_t>(out_width) * 3;
  for (int oy = 0; oy < out_height; ++oy) {
    double* dst = out.values.data() + oy * mid_stride;
    for (std::size_t i = 0; i < mid_stride; ++i) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += rows.weight[oy][k] * horizontal[rows.index[oy][k] * mid_stride + i];
      dst[i] = std::clamp(acc, 0.0, 255.0);
    }
  }
  return out;
}

RgbImage bicubic_downsample(const RgbImage& image, int out_width, int out_height,
                            const BicubicKernel& kernel) {
  const ResampledImage resampled = bicubic_resample(image, out_width, out_height, kernel);
  RgbImage out(out_width, out_height);
  for (std::size_t i = 0; i < resampled.values.size(); ++i)
    out.bytes()[i] = static_cast<std::uint8_t>(std::lround(resampled.values[i]));
  return out;
}

SemanticClass nearest_class(Rgb color) {
  SemanticClass best = SemanticClass::Ground;
  long best_d2 = std::numeric_limits<long>::max();
  for (SemanticClass c : kAllClasses) {
    const Rgb p = palette_color(c);
    const long dr = long{color.r} - p.r, dg = long{color.g} - p.g, db = long{color.b} - p.b;
    const long d2 = dr * dr + dg * dg + db * db;
    // Strict comparison keeps the earliest class on ties.
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

ClassImage class_quantize(const RgbImage& image) {
  ClassImage out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) out.set(x, y, nearest_class(image.at(x, y)));
  return out;
}

Tensor to_tensor(const RgbImage& image, int expected_width, int expected_height) {
  if (image.width() != expected_width || image.height() != expected_height)
    throw ShapeError("observation image is " + std::to_string(image.width()) + "x" +
                     std::to_string(image.height()) + ", expected " + std::to_string(expected_width) +
                     "x" + std::to_string(expected_height));
  const int w = image.width(), h = image.height();
  Tensor t({3, static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
  const auto& bytes = image.bytes();
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  for (std::size_t p = 0; p < plane; ++p)
    for (std::size_t ch = 0; ch < 3; ++ch) t[ch * plane + p] = bytes[p * 3 + ch] / 255.0;
  return t;
}

}  // namespace svrl
