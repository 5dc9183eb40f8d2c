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

#include "svrl/layers.hpp"

#include <algorithm>
#include <cmath>

namespace svrl::layers {

void dense_forward(std::span<const double> weight, std::span<const double> bias,
                   std::span<const double> x, std::span<double> y) {
  const std::size_t in = x.size();
  for (std::size_t o = 0; o < y.size(); ++o) {
    const double* row = weight.data() + o * in;
    double acc = bias[o];
    for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

void dense_backward(std::span<const double> weight, std::span<const double> x,
                    std::span<const double> dy, std::span<double> d_weight, std::span<double> d_bias,
                    std::span<double> dx) {
  const std::size_t in = x.size();
  if (!dx.empty()) std::fill(dx.begin(), dx.end(), 0.0);
  for (std::size_t o = 0; o < dy.size(); ++o) {
    const double g = dy[o];
    d_bias[o] += g;
    if (g == 0.0) continue;
    double* drow = d_weight.data() + o * in;
    for (std::size_t i = 0; i < in; ++i) drow[i] += g * x[i];
    if (!dx.empty()) {
      const double* row = weight.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) dx[i] += g * row[i];
    }
  }
}

void relu_forward(std::span<double> values) {
  for (double& v : values) v = v > 0.0 ? v : 0.0;
}

void relu_backward(std::span<const double> output, std::span<double> dy) {
  for (std::size_t i = 0; i < dy.size(); ++i)
    if (!(output[i] > 0.0)) dy[i] = 0.0;
}

void im2col(const ConvGeometry& g, std::span<const double> x, std::vector<double>& columns) {
  const std::size_t oh = g.out_height(), ow = g.out_width(), positions = oh * ow;
  columns.resize(g.patch_size() * positions);
  std::size_t row = 0;
  for (std::size_t c = 0; c < g.in_channels; ++c) {
    const double* plane = x.data() + c * g.in_height * g.in_width;
    for (std::size_t ky = 0; ky < g.kernel; ++ky) {
      for (std::size_t kx = 0; kx < g.kernel; ++kx, ++row) {
        double* dst = columns.data() + row * positions;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          const double* src = plane + (oy * g.stride + ky) * g.in_width + kx;
          for (std::size_t ox = 0; ox < ow; ++ox) dst[oy * ow + ox] = src[ox * g.stride];
        }
      }
    }
  }
}

void conv2d_forward(const ConvGeometry& g, std::span<const double> weight, std::span<const double> bias,
                    std::span<const double> columns, std::span<double> y) {
  const std::size_t positions = g.positions(), patch = g.patch_size();
  for (std::size_t oc = 0; oc < g.out_channels; ++oc) {
    double* out = y.data() + oc * positions;
    std::fill(out, out + positions, bias[oc]);
    const double* w = weight.data() + oc * patch;
    for (std::size_t k = 0; k < patch; ++k) {
      const double wk = w[k];
      const double* col = columns.data() + k * positions;
      for (std::size_t p = 0; p < positions; ++p) out[p] += wk * col[p];
    }
  }
}

void conv2d_backward(const ConvGeometry& g, std::span<const double> weight,
                     std::span<const double> columns, std::span<const double> dy,
                     std::span<double> d_weight, std::span<double> d_bias, std::span<double> dx) {
  const std::size_t positions = g.positions(), patch = g.patch_size();
  for (std::size_t oc = 0; oc < g.out_channels; ++oc) {
    const double* grad = dy.data() + oc * positions;
    double bias_acc = 0.0;
    for (std::size_t p = 0; p < positions; ++p) bias_acc += grad[p];
    d_bias[oc] += bias_acc;
    double* dw = d_weight.data() + oc * patch;
    for (std::size_t k = 0; k < patch; ++k) {
      const double* col = columns.data() + k * positions;
      double acc = 0.0;
      for (std::size_t p = 0; p < positions; ++p) acc += grad[p] * col[p];
      dw[k] += acc;
    }
  }
  if (dx.empty()) return;

  std::vector<double> d_columns(patch * positions, 0.0);
  for (std::size_t oc = 0; oc < g.out_channels; ++oc) {
    const double* grad = dy.data() + oc * positions;
    const double* w = weight.data() + oc * patch;
    for (std::size_t k = 0; k < patch; ++k) {
      const double wk = w[k];
      double* dcol = d_columns.data() + k * positions;
      for (std::size_t p = 0; p < positions; ++p) dcol[p] += wk * grad[p];
    }
  }
  std::fill(dx.begin(), dx.end(), 0.0);
  const std::size_t oh = g.out_height(), ow = g.out_width();
  std::size_t row = 0;
  for (std::size_t c = 0; c < g.in_channels; ++c) {
    double* plane = dx.data() + c * g.in_height * g.in_width;
    for (std::size_t ky = 0; ky < g.kernel; ++ky) {
      for (std::size_t kx = 0; kx < g.kernel; ++kx, ++row) {
        const double* src = d_columns.data() + row * positions;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          double* dst = plane + (oy * g.stride + ky) * g.in_width + kx;
          for (std::size_t ox = 0; ox < ow; ++ox) dst[ox * g.stride] += src[oy * ow + ox];
        }
      }
    }
  }
}

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

void lstm_forward(std::size_t input_size, std::size_t hidden_size, std::span<const double> weight_ih,
                  std::span<const double> weight_hh, std::span<const double> bias,
                  std::span<const double> x, std::span<const double> h, std::span<const double> c,
                  std::span<double> h_next, std::span<double> c_next, LstmCache* cache) {
  const std::size_t n = hidden_size;
  std::vector<double> z(4 * n);
  for (std::size_t r = 0; r < 4 * n; ++r) {
    const double* wi = weight_ih.data() + r * input_size;
    const double* wh = weight_hh.data() + r * n;
    double acc = bias[r];
    for (std::size_t k = 0; k < input_size; ++k) acc += wi[k] * x[k];
    for (std::size_t k = 0; k < n; ++k) acc += wh[k] * h[k];
    z[r] = acc;
  }
  LstmCache local;
  LstmCache& cc = cache ? *cache : local;
  cc.i.resize(n);
  cc.f.resize(n);
  cc.g.resize(n);
  cc.o.resize(n);
  cc.c_next.resize(n);
  cc.tanh_c_next.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    cc.i[k] = sigmoid(z[k]);
    cc.f[k] = sigmoid(z[n + k]);
    cc.g[k] = std::tanh(z[2 * n + k]);
    cc.o[k] = sigmoid(z[3 * n + k]);
    cc.c_next[k] = cc.f[k] * c[k] + cc.i[k] * cc.g[k];
    cc.tanh_c_next[k] = std::tanh(cc.c_next[k]);
    c_next[k] = cc.c_next[k];
    h_next[k] = cc.o[k] * cc.tanh_c_next[k];
  }
  if (cache) {
    cache->x.assign(x.begin(), x.end());
    cache->h.assign(h.begin(), h.end());
    cache->c.assign(c.begin(), c.end());
  }
}

void lstm_backward(std::size_t input_size, std::size_t hidden_size, std::span<const double> weight_ih,
                   std::span<const double> weight_hh, const LstmCache& cache,
                   std::span<const double> dh_next, std::span<const double> dc_next,
                   std::span<double> d_weight_ih, std::span<double> d_weight_hh,
                   std::span<double> d_bias, std::span<double> dx, std::span<double> dh,
                   std::span<double> dc) {
  const std::size_t n = hidden_size;
  std::vector<double> dz(4 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tc = cache.tanh_c_next[k];
    double dcn = dh_next[k] * cache.o[k] * (1.0 - tc * tc);
    if (!dc_next.empty()) dcn += dc_next[k];
    const double di = dcn * cache.g[k];
    const double df = dcn * cache.c[k];
    const double dg = dcn * cache.i[k];
    const double d_o = dh_next[k] * tc;
    dz[k] = di * cache.i[k] * (1.0 - cache.i[k]);
    dz[n + k] = df * cache.f[k] * (1.0 - cache.f[k]);
    dz[2 * n + k] = dg * (1.0 - cache.g[k] * cache.g[k]);
    dz[3 * n + k] = d_o * cache.o[k] * (1.0 - cache.o[k]);
    if (!dc.empty()) dc[k] = dcn * cache.f[k];
  }
  if (!dx.empty()) std::fill(dx.begin(), dx.end(), 0.0);
  if (!dh.empty()) std::fill(dh.begin(), dh.end(), 0.0);
  for (std::size_t r = 0; r < 4 * n; ++r) {
    const double g = dz[r];
    d_bias[r] += g;
    double* dwi = d_weight_ih.data() + r * input_size;
    double* dwh = d_weight_hh.data() + r * n;
    for (std::size_t k = 0; k < input_size; ++k) dwi[k] += g * cache.x[k];
    for (std::size_t k = 0; k < n; ++k) dwh[k] += g * cache.h[k];
    if (!dx.empty()) {
      const double* wi = weight_ih.data() + r * input_size;
      for (std::size_t k = 0; k < input_size; ++k) dx[k] += g * wi[k];
    }
    if (!dh.empty()) {
      const double* wh = weight_hh.data() + r * n;
      for (std::size_t k = 0; k < n; ++k) dh[k] += g * wh[k];
    }
  }
}

}  // namespace svrl::layers
