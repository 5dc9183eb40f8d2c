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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "gradcheck.hpp"
#include "gradient_suite.hpp"
#include "svrl/checkpoint.hpp"
#include "svrl/errors.hpp"
#include "svrl/layers.hpp"
#include "svrl/optim.hpp"
#include "svrl/policy.hpp"

namespace svrl {
namespace {

using testing::central_diff;
using testing::dot;
using testing::max_rel_error;
using testing::random_vector;
using testing::rel_error;

constexpr double kTol = 1e-6;

NetConfig tiny(NetKind kind) {
  NetConfig c;
  c.kind = kind;
  c.obs_height = 13;
  c.obs_width = 15;
  c.conv1_filters = 4;
  c.conv2_filters = 4;
  c.dense_units = 16;
  c.lstm_units = 8;
  c.mlp_hidden = 12;
  return c;
}

void randomize(PolicyNetwork& net, Rng& rng) {
  for (NamedTensor& p : net.mutable_parameters())
    for (double& v : p.tensor.span()) v = rng.uniform(-0.5, 0.5);
}

Tensor random_input(const NetConfig& c, Rng& rng) {
  Tensor t(c.input_shape());
  for (double& v : t.span()) v = rng.uniform(0, 1);
  return t;
}

RecurrentState random_state(const PolicyNetwork& net, Rng& rng) {
  RecurrentState s = net.initial_state();
  for (double& v : s.hidden) v = rng.uniform(-0.9, 0.9);
  for (double& v : s.cell) v = rng.uniform(-2, 2);
  return s;
}

TEST(Dense, GradientsMatchFiniteDifferences) { EXPECT_LT(testing::dense_gradients(1, 20).worst, kTol); }

TEST(Dense, BackwardAccumulatesParameterGradients) {
  Rng rng(2);
  auto w = random_vector(rng, 6), x = random_vector(rng, 3), dy = random_vector(rng, 2);
  std::vector<double> dw(6, 1.0), db(2, 1.0);
  layers::dense_backward(w, x, dy, dw, db, {});
  for (std::size_t o = 0; o < 2; ++o) {
    EXPECT_DOUBLE_EQ(db[o], 1.0 + dy[o]);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(dw[o * 3 + i], 1.0 + dy[o] * x[i]);
  }
}

TEST(Relu, MasksByOutput) {
  std::vector<double> v{-1.0, 0.0, 2.0};
  layers::relu_forward(v);
  EXPECT_EQ(v, (std::vector<double>{0.0, 0.0, 2.0}));
  std::vector<double> dy{5.0, 5.0, 5.0};
  layers::relu_backward(v, dy);
  EXPECT_EQ(dy, (std::vector<double>{0.0, 0.0, 5.0}));
}

// Direct loops over output positions, independent of im2col.
std::vector<double> naive_conv(const layers::ConvGeometry& g, const std::vector<double>& w,
                               const std::vector<double>& b, const std::vector<double>& x) {
  std::vector<double> y(g.output_size());
  for (std::size_t oc = 0; oc < g.out_channels; ++oc)
    for (std::size_t oy = 0; oy < g.out_height(); ++oy)
      for (std::size_t ox = 0; ox < g.out_width(); ++ox) {
        double acc = b[oc];
        for (std::size_t ic = 0; ic < g.in_channels; ++ic)
          for (std::size_t ky = 0; ky < g.kernel; ++ky)
            for (std::size_t kx = 0; kx < g.kernel; ++kx)
              acc += w[((oc * g.in_channels + ic) * g.kernel + ky) * g.kernel + kx] *
                     x[(ic * g.in_height + oy * g.stride + ky) * g.in_width + ox * g.stride + kx];
        y[(oc * g.out_height() + oy) * g.out_width() + ox] = acc;
      }
  return y;
}

layers::ConvGeometry random_geometry(Rng& rng) {
  layers::ConvGeometry g;
  g.in_channels = 1 + rng.next_u64() % 3;
  g.kernel = 1 + rng.next_u64() % 4;
  g.stride = 1 + rng.next_u64() % 2;
  g.in_height = g.kernel + rng.next_u64() % 6;
  g.in_width = g.kernel + rng.next_u64() % 7;
  g.out_channels = 1 + rng.next_u64() % 3;
  return g;
}

TEST(Conv, ForwardMatchesDirectLoops) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_geometry(rng);
    const auto w = random_vector(rng, g.weight_size()), b = random_vector(rng, g.out_channels);
    const auto x = random_vector(rng, g.in_channels * g.in_height * g.in_width);
    std::vector<double> cols, y(g.output_size());
    layers::im2col(g, x, cols);
    layers::conv2d_forward(g, w, b, cols, y);
    const auto ref = naive_conv(g, w, b, x);
    for (std::size_t i = 0; i < y.size(); ++i) ASSERT_NEAR(y[i], ref[i], 1e-12);
  }
}

TEST(Conv, GradientsMatchFiniteDifferences) { EXPECT_LT(testing::conv_gradients(4, 20).worst, kTol); }

TEST(Lstm, ForwardMatchesCellEquations) {
  Rng rng(5);
  const std::size_t in = 3, hid = 2;
  const auto wih = random_vector(rng, 4 * hid * in), whh = random_vector(rng, 4 * hid * hid);
  const auto b = random_vector(rng, 4 * hid), x = random_vector(rng, in), h = random_vector(rng, hid),
             c = random_vector(rng, hid);
  std::vector<double> hn(hid), cn(hid);
  layers::lstm_forward(in, hid, wih, whh, b, x, h, c, hn, cn, nullptr);
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  for (std::size_t u = 0; u < hid; ++u) {
    double z[4];
    for (int gate = 0; gate < 4; ++gate) {
      const std::size_t row = gate * hid + u;
      z[gate] = b[row];
      for (std::size_t k = 0; k < in; ++k) z[gate] += wih[row * in + k] * x[k];
      for (std::size_t k = 0; k < hid; ++k) z[gate] += whh[row * hid + k] * h[k];
    }
    const double cell = sig(z[1]) * c[u] + sig(z[0]) * std::tanh(z[2]);
    EXPECT_NEAR(cn[u], cell, 1e-14);
    EXPECT_NEAR(hn[u], sig(z[3]) * std::tanh(cell), 1e-14);
  }
}

TEST(Lstm, GradientsMatchFiniteDifferences) { EXPECT_LT(testing::lstm_gradients(6, 20).worst, kTol); }

TEST(Gaussian, LogProbAndEntropyClosedForm) {
  const ActionVec mean{0.3, -0.2}, log_std{-0.5, 0.4}, a{0.1, 0.6};
  double expect = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double s = std::exp(log_std[k]);
    expect += -0.5 * std::pow((a[k] - mean[k]) / s, 2) - log_std[k] - 0.5 * std::log(2 * std::numbers::pi);
  }
  EXPECT_NEAR(gaussian_log_prob(mean, log_std, a), expect, 1e-14);
  EXPECT_NEAR(gaussian_entropy(log_std), -0.1 + std::log(2 * std::numbers::pi * std::numbers::e), 1e-14);
}

TEST(Gaussian, LogProbGradientMatchesFiniteDifferences) {
  EXPECT_LT(testing::gaussian_gradients(7, 20).worst, kTol);
}

struct Projection {
  ActionVec a, b;
  double c;
};

Projection random_projection(Rng& rng) {
  return {{rng.uniform(-1, 1), rng.uniform(-1, 1)}, {rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1)};
}

double project(const PolicyOutput& o, const Projection& p) {
  return p.a[0] * o.mean[0] + p.a[1] * o.mean[1] + p.b[0] * o.log_std[0] + p.b[1] * o.log_std[1] + p.c * o.value;
}

// Worst relative error over the listed parameter coordinates (all when empty).
double network_grad_error(PolicyNetwork& net, const Tensor& obs, const RecurrentState& state, const Projection& p,
                          std::size_t stride = 1) {
  ForwardCache cache;
  net.forward(obs, state, &cache);
  const TensorList grads = net.backward(cache, p.a, p.b, p.c);
  double worst = 0.0;
  for (std::size_t t = 0; t < grads.size(); ++t) {
    const std::size_t n = grads[t].tensor.size();
    for (std::size_t i = t % stride; i < n; i += stride) {
      auto f = [&] { return project(net.forward(obs, state), p); };
      double& x = net.mutable_parameters()[t].tensor[i];
      worst = std::max(worst, rel_error(grads[t].tensor[i], central_diff(f, x)));
    }
  }
  return worst;
}

class NetworkGradients : public ::testing::TestWithParam<NetKind> {};

TEST_P(NetworkGradients, AllParametersMatchFiniteDifferences) {
  EXPECT_LT(testing::network_gradients(GetParam(), 8, 20).worst, kTol);
}

INSTANTIATE_TEST_SUITE_P(Kinds, NetworkGradients, ::testing::Values(NetKind::Cnn, NetKind::CnnLstm, NetKind::Mlp),
                         [](const auto& info) {
                           return std::string(info.param == NetKind::CnnLstm ? "CnnLstm"
                                              : info.param == NetKind::Cnn ? "Cnn" : "Mlp");
                         });

TEST(NetworkGradients, DefaultResolutionSampled) {
  Rng rng(9);
  NetConfig cfg;
  cfg.kind = NetKind::CnnLstm;
  PolicyNetwork net(cfg, 3);
  randomize(net, rng);
  for (NamedTensor& p : net.mutable_parameters())
    for (double& v : p.tensor.span()) v *= 0.2;
  const Tensor obs = random_input(cfg, rng);
  EXPECT_LT(network_grad_error(net, obs, random_state(net, rng), random_projection(rng), 97), kTol);
}

TEST(LogStd, GradientStopsOutsideClamp) {
  Rng rng(10);
  const NetConfig cfg = tiny(NetKind::Mlp);
  PolicyNetwork net(cfg, 1);
  auto& ls = net.mutable_parameters()[6].tensor;
  ASSERT_EQ(net.parameters()[6].name, "policy.log_std");
  ls[0] = 3.0;
  ls[1] = -7.0;
  const Tensor obs = random_input(cfg, rng);
  ForwardCache cache;
  const PolicyOutput out = net.forward(obs, {}, &cache);
  EXPECT_EQ(out.log_std[0], kLogStdMax);
  EXPECT_EQ(out.log_std[1], kLogStdMin);
  const TensorList g = net.backward(cache, {0, 0}, {1, 1}, 0);
  EXPECT_EQ(g[6].tensor[0], 0.0);
  EXPECT_EQ(g[6].tensor[1], 0.0);
}

TEST(Topology, ParameterCountsAtDefaultResolution) {
  NetConfig cfg;
  // conv1 3->8 5x5, conv2 8->16 3x3, 16*5*10 flatten into 128 units.
  const std::size_t conv = (8 * 3 * 25 + 8) + (16 * 8 * 9 + 16);
  const std::size_t fc = 16 * 5 * 10 * 128 + 128;
  auto heads = [](std::size_t f) { return (2 * f + 2) + 2 + (f + 1); };
  EXPECT_EQ(PolicyNetwork(cfg, 0).parameter_count(), conv + fc + heads(128));
  EXPECT_EQ(conv + fc + heads(128), 104693u);
  cfg.kind = NetKind::CnnLstm;
  const std::size_t lstm = 4 * 64 * (128 + 64) + 4 * 64;
  EXPECT_EQ(PolicyNetwork(cfg, 0).parameter_count(), conv + fc + lstm + heads(64));
  EXPECT_EQ(conv + fc + lstm + heads(64), 153909u);
  cfg.kind = NetKind::Mlp;
  EXPECT_EQ(PolicyNetwork(cfg, 0).parameter_count(), (7 * 64 + 64) + (64 * 64 + 64) + heads(64));
}

TEST(Topology, ConvShapesAtDefaultResolution) {
  const NetConfig cfg;
  EXPECT_EQ(cfg.input_shape(), (Shape{3, 27, 48}));
  const PolicyNetwork net(cfg, 0);
  const auto& p = net.parameters();
  EXPECT_EQ(p[4].name, "fc.weight");
  EXPECT_EQ(p[4].tensor.shape(), (Shape{128, 800}));
}

TEST(Topology, InvalidConfigsRejected) {
  NetConfig cfg;
  cfg.obs_width = 4;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(parse_net_kind("transformer"), ConfigError);
  EXPECT_EQ(parse_net_kind("cnn-lstm"), NetKind::CnnLstm);
}

// W W^T == gain^2 I when rows <= columns, W^T W otherwise.
void expect_orthogonal(const Tensor& w, double gain) {
  const std::size_t rows = w.dim(0), cols = w.size() / rows;
  const bool wide = rows <= cols;
  const std::size_t n = wide ? rows : cols;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < (wide ? cols : rows); ++k)
        s += wide ? w[i * cols + k] * w[j * cols + k] : w[k * cols + i] * w[k * cols + j];
      EXPECT_NEAR(s, i == j ? gain * gain : 0.0, 1e-10 * std::max(1.0, gain * gain));
    }
}

TEST(Init, OrthogonalWithGainsAndZeroBiases) {
  NetConfig cfg = tiny(NetKind::CnnLstm);
  cfg.log_std_init = -0.7;
  const PolicyNetwork net(cfg, 42);
  for (const NamedTensor& p : net.parameters()) {
    if (p.name.ends_with("bias")) {
      for (double v : p.tensor.span()) EXPECT_EQ(v, 0.0) << p.name;
    } else if (p.name == "policy.log_std") {
      for (double v : p.tensor.span()) EXPECT_EQ(v, -0.7);
    } else if (p.name == "policy.weight") {
      expect_orthogonal(p.tensor, 0.01);
    } else if (p.name == "value.weight") {
      expect_orthogonal(p.tensor, 1.0);
    } else if (p.name.starts_with("lstm")) {
      expect_orthogonal(p.tensor, 1.0);
    } else {
      expect_orthogonal(p.tensor, std::sqrt(2.0));
    }
  }
  EXPECT_EQ(PolicyNetwork(cfg, 42).parameters(), net.parameters());
  EXPECT_NE(PolicyNetwork(cfg, 43).parameters(), net.parameters());
}

TEST(Forward, ShapeMismatchThrows) {
  const NetConfig cfg = tiny(NetKind::CnnLstm);
  PolicyNetwork net(cfg, 1);
  Rng rng(1);
  EXPECT_THROW(net.forward(Tensor({3, 14, 15}), net.initial_state()), ShapeError);
  EXPECT_THROW(net.forward(random_input(cfg, rng), RecurrentState{}), ShapeError);
}

TEST(Forward, RecurrentStateAdvances) {
  const NetConfig cfg = tiny(NetKind::CnnLstm);
  PolicyNetwork net(cfg, 1);
  Rng rng(2);
  const Tensor obs = random_input(cfg, rng);
  const PolicyOutput a = net.forward(obs, net.initial_state());
  const PolicyOutput b = net.forward(obs, a.state);
  EXPECT_NE(a.state, net.initial_state());
  EXPECT_NE(a.value, b.value);
}

TEST(Cache, StaleOrReusedCacheIsRejected) {
  const NetConfig cfg = tiny(NetKind::Cnn);
  PolicyNetwork net(cfg, 1);
  Rng rng(3);
  const Tensor obs = random_input(cfg, rng);
  ForwardCache cache;
  net.forward(obs, {}, &cache);
  net.mutable_parameters();
  EXPECT_THROW(net.backward(cache, {1, 1}, {0, 0}, 1), ContractViolation);

  net.forward(obs, {}, &cache);
  net.backward(cache, {1, 1}, {0, 0}, 1);
  EXPECT_THROW(net.backward(cache, {1, 1}, {0, 0}, 1), ContractViolation);

  PolicyNetwork other(cfg, 1);
  other.forward(obs, {}, &cache);
  EXPECT_THROW(net.backward(cache, {1, 1}, {0, 0}, 1), ContractViolation);

  net.forward(obs, {}, &cache);
  TensorList wrong = PolicyNetwork::make_layout(tiny(NetKind::Mlp));
  EXPECT_THROW(net.backward_accumulate(cache, {1, 1}, {0, 0}, 1, wrong), ShapeError);
}

TEST(Adam, MatchesScalarRecurrence) {
  TensorList params{{"w", Tensor({3}, std::vector<double>{0.5, -1.0, 2.0})}};
  AdamState st = AdamState::for_parameters(params);
  Rng rng(4);
  std::vector<double> p{0.5, -1.0, 2.0}, m(3, 0.0), v(3, 0.0);
  const double lr = 3e-4;
  for (int t = 1; t <= 5; ++t) {
    TensorList grads{{"w", Tensor({3}, random_vector(rng, 3, 2.0))}};
    adam_step(params, grads, st, lr);
    for (int i = 0; i < 3; ++i) {
      const double g = grads[0].tensor[i];
      m[i] = 0.9 * m[i] + 0.1 * g;
      v[i] = 0.999 * v[i] + 0.001 * g * g;
      const double mh = m[i] / (1 - std::pow(0.9, t)), vh = v[i] / (1 - std::pow(0.999, t));
      p[i] -= lr * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(params[0].tensor[i], p[i], 1e-15);
    }
  }
  EXPECT_EQ(st.step, 5);
  // First step moves every coordinate by about lr regardless of scale.
  TensorList q{{"w", Tensor({1}, 0.0)}};
  AdamState s2 = AdamState::for_parameters(q);
  adam_step(q, {{"w", Tensor({1}, 1e-3)}}, s2, 0.1);
  EXPECT_NEAR(q[0].tensor[0], -0.1, 1e-6);
  TensorList bad{{"x", Tensor({1})}};
  EXPECT_THROW(adam_step(q, bad, s2, 0.1), ShapeError);
}

TEST(Clip, PostClipNormIsMinOfNormAndLimit) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double scale = std::pow(10.0, rng.uniform(-3, 2));
    TensorList g{{"a", Tensor({4}, random_vector(rng, 4, scale))}, {"b", Tensor({2, 3}, random_vector(rng, 6, scale))}};
    const TensorList before = g;
    const double norm = global_l2_norm(g);
    EXPECT_DOUBLE_EQ(clip_grad_norm(g, 0.5), norm);
    EXPECT_NEAR(global_l2_norm(g), std::min(norm, 0.5), 1e-12);
    if (norm <= 0.5) EXPECT_EQ(g, before);
    // Direction is preserved.
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(g[0].tensor[k] * norm, before[0].tensor[k] * std::min(norm, 0.5), 1e-12);
  }
  TensorList g{{"a", Tensor({1}, 1.0)}};
  EXPECT_THROW(clip_grad_norm(g, 0.0), ConfigError);
}

TEST(Checkpoint, RoundTripPreservesBehaviour) {
  Rng rng(6);
  for (NetKind kind : {NetKind::Cnn, NetKind::CnnLstm, NetKind::Mlp}) {
    NetConfig cfg = tiny(kind);
    cfg.log_std_init = -1.25;
    PolicyNetwork net(cfg, 9);
    randomize(net, rng);
    const auto path = std::filesystem::temp_directory_path() / "svrl_ckpt_test.svrl";
    save_checkpoint(net, path.string());
    const PolicyNetwork back = load_checkpoint(path.string());
    std::filesystem::remove(path);
    EXPECT_EQ(back.config(), net.config());
    EXPECT_EQ(back.parameters(), net.parameters());
    const Tensor obs = random_input(cfg, rng);
    const PolicyOutput a = net.forward(obs, net.initial_state()), b = back.forward(obs, back.initial_state());
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(Checkpoint, MalformedBytesRejected) {
  const PolicyNetwork net(tiny(NetKind::Mlp), 1);
  const std::vector<std::uint8_t> good = encode_checkpoint(net);
  EXPECT_EQ(std::string(good.begin(), good.begin() + 4), "SVRL");
  EXPECT_EQ(decode_checkpoint(good).parameters(), net.parameters());
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad), ConfigError);
  bad = good;
  bad.resize(good.size() - 3);
  EXPECT_THROW(decode_checkpoint(bad), ConfigError);
  bad = good;
  bad.push_back(0);
  EXPECT_THROW(decode_checkpoint(bad), ConfigError);
  bad = good;
  bad[4] = 9;  // version
  EXPECT_THROW(decode_checkpoint(bad), ConfigError);
  EXPECT_THROW(load_checkpoint("/nonexistent/ckpt.svrl"), IoError);
}

}  // namespace
}  // namespace svrl
