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

#ifndef SVRL_LAYERS_HPP_
#define SVRL_LAYERS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace svrl::layers {

// All weight matrices are row-major. Backward functions accumulate into the
// parameter gradients and overwrite the input gradient when one is given.

// y = W x + b with W of shape (out, in).
void dense_forward(std::span<const double> weight, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y);
void dense_backward(std::span<const double> weight, std::span<const double> x,
                    std::span<const double> dy, std::span<double> d_weight, std::span<double> d_bias,
                    std::span<double> dx);

void relu_forward(std::span<double> values);
// Masks dy by the post-activation output.
void relu_backward(std::span<const double> output, std::span<double> dy);

// Valid-padding 2-D convolution over (channels, height, width) inputs.
struct ConvGeometry {
  std::size_t in_channels = 0;
  std::size_t in_height = 0;
  std::size_t in_width = 0;
  std::size_t out_channels = 0;
  std::size_t kernel = 1;
  std::size_t stride = 1;

  std::size_t out_height() const { return (in_height - kernel) / stride + 1; }
  std::size_t out_width() const { return (in_width - kernel) / stride + 1; }
  std::size_t patch_size() const { return in_channels * kernel * kernel; }
  std::size_t positions() const { return out_height() * out_width(); }
  std::size_t weight_size() const { return out_channels * patch_size(); }
  std::size_t output_size() const { return out_channels * positions(); }
  bool valid() const { return kernel >= 1 && stride >= 1 && in_height >= kernel && in_width >= kernel; }
};

// Unfolds x into a (patch_size, positions) column matrix.
void im2col(const ConvGeometry& g, std::span<const double> x, std::vector<double>& columns);
// Forward through precomputed columns; weight is (out_channels, patch_size).
void conv2d_forward(const ConvGeometry& g, std::span<const double> weight, std::span<const double> bias,
                    std::span<const double> columns, std::span<double> y);
// dx may be empty when the input gradient is not needed.
void conv2d_backward(const ConvGeometry& g, std::span<const double> weight,
                     std::span<const double> columns, std::span<const double> dy,
                     std::span<double> d_weight, std::span<double> d_bias, std::span<double> dx);

// LSTM cell with gate order (input, forget, cell, output):
//   z = W_ih x + W_hh h + b,  c' = f*c + i*g,  h' = o*tanh(c').
struct LstmCache {
  std::vector<double> x, h, c;
  std::vector<double> i, f, g, o;
  std::vector<double> c_next, tanh_c_next;
};

void lstm_forward(std::size_t input_size, std::size_t hidden_size, std::span<const double> weight_ih,
                  std::span<const double> weight_hh, std::span<const double> bias,
                  std::span<const double> x, std::span<const double> h, std::span<const double> c,
                  std::span<double> h_next, std::span<double> c_next, LstmCache* cache);
// dc_next may be empty (treated as zero). dx, dh, dc may be empty.
void lstm_backward(std::size_t input_size, std::size_t hidden_size, std::span<const double> weight_ih,
                   std::span<const double> weight_hh, const LstmCache& cache,
                   std::span<const double> dh_next, std::span<const double> dc_next,
                   std::span<double> d_weight_ih, std::span<double> d_weight_hh,
                   std::span<double> d_bias, std::span<double> dx, std::span<double> dh,
                   std::span<double> dc);

}  // namespace svrl::layers

#endif  // SVRL_LAYERS_HPP_
