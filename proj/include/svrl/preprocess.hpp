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

#ifndef SVRL_PREPROCESS_HPP_
#define SVRL_PREPROCESS_HPP_

#include <array>
#include <vector>

#include "svrl/image.hpp"
#include "svrl/tensor.hpp"

namespace svrl {

// Keys cubic convolution kernel; a = -0.5 is the Catmull-Rom member.
struct BicubicKernel {
  double a = -0.5;

  double weight(double offset) const;
  // Weights for taps floor(pos)-1 .. floor(pos)+2 around a sample position.
  std::array<double, 4> taps(double position, int& first_tap) const;
};

// Maps an output pixel center onto the source grid (pixel-center aligned).
double source_coordinate(int out_index, int in_size, int out_size);

// Interpolated channel values before byte rounding, clamped to [0, 255].
// Layout matches RgbImage: interleaved RGB, row-major.
struct ResampledImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

// Separable 4x4 cubic convolution downsampling with clamped edges. Throws
// ConfigError on an upscale request or a zero-sized target.
ResampledImage bicubic_resample(const RgbImage& image, int out_width, int out_height,
                                const BicubicKernel& kernel = {});
RgbImage bicubic_downsample(const RgbImage& image, int out_width, int out_height,
                            const BicubicKernel& kernel = {});

// Nearest palette color in RGB space; ties resolve to the lower class index.
SemanticClass nearest_class(Rgb color);
ClassImage class_quantize(const RgbImage& image);

// Channel-major (3, H, W) tensor of bytes / 255. Throws ShapeError when the
// image is not expected_width x expected_height.
Tensor to_tensor(const RgbImage& image, int expected_width, int expected_height);

}  // namespace svrl

#endif  // SVRL_PREPROCESS_HPP_
