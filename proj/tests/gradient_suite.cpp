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

#include "gradient_suite.hpp"

#include <algorithm>
#include <cmath>

#include "gradcheck.hpp"
#include "svrl/layers.hpp"

namespace svrl::testing {
namespace {

void track(GradReport& r, double err) { r.worst = std::max(r.worst, err); }

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

struct Projection {
  ActionVec a, b;
  double c;
};

double project(const PolicyOutput& o, const Projection& p) {
  return p.a[0] * o.mean[0] + p.a[1] * o.mean[1] + p.b[0] * o.log_std[0] + p.b[1] * o.log_std[1] + p.c * o.value;
}

}  // namespace

NetConfig tiny_net(NetKind kind) {
  NetConfig c;
  c.kind = kind;
  c.obs_height = 13;
  c.obs_width = 15;
  c.conv1_filters = 3;
  c.conv2_filters = 3;
  c.dense_units = 10;
  c.lstm_units = 6;
  c.mlp_hidden = 10;
  c.log_std_init = -0.5;
  return c;
}

GradReport dense_gradients(std::uint64_t seed, int instances) {
  Rng rng(seed);
  GradReport r{instances, 0.0};
  for (int trial = 0; trial < instances; ++trial) {
    const std::size_t in = 3 + rng.next_u64() % 6, out = 2 + rng.next_u64() % 5;
    auto w = random_vector(rng, in * out), b = random_vector(rng, out), x = random_vector(rng, in);
    const auto proj = random_vector(rng, out);
    auto loss = [&] {
      std::vector<double> y(out);
      layers::dense_forward(w, b, x, y);
      return dot(proj, y);
    };
    std::vector<double> dw(w.size(), 0.0), db(out, 0.0), dx(in);
    layers::dense_backward(w, x, proj, dw, db, dx);
    track(r, max_rel_error(loss, w, dw));
    track(r, max_rel_error(loss, b, db));
    track(r, max_rel_error(loss, x, dx));
  }
  return r;
}

GradReport conv_gradients(std::uint64_t seed, int instances) {
  Rng rng(seed);
  GradReport r{instances, 0.0};
  for (int trial = 0; trial < instances; ++trial) {
    const auto g = random_geometry(rng);
    auto w = random_vector(rng, g.weight_size()), b = random_vector(rng, g.out_channels);
    auto x = random_vector(rng, g.in_channels * g.in_height * g.in_width);
    const auto proj = random_vector(rng, g.output_size());
    auto loss = [&] {
      std::vector<double> cols, y(g.output_size());
      layers::im2col(g, x, cols);
      layers::conv2d_forward(g, w, b, cols, y);
      return dot(proj, y);
    };
    std::vector<double> cols;
    layers::im2col(g, x, cols);
    std::vector<double> dw(w.size(), 0.0), db(b.size(), 0.0), dx(x.size());
    layers::conv2d_backward(g, w, cols, proj, dw, db, dx);
    track(r, max_rel_error(loss, w, dw));
    track(r, max_rel_error(loss, b, db));
    track(r, max_rel_error(loss, x, dx));
  }
  return r;
}

GradReport lstm_gradients(std::uint64_t seed, int instances) {
  Rng rng(seed);
  GradReport r{instances, 0.0};
  for (int trial = 0; trial < instances; ++trial) {
    const std::size_t in = 2 + rng.next_u64() % 4, hid = 1 + rng.next_u64() % 4;
    auto wih = random_vector(rng, 4 * hid * in), whh = random_vector(rng, 4 * hid * hid);
    auto b = random_vector(rng, 4 * hid), x = random_vector(rng, in), h = random_vector(rng, hid),
         c = random_vector(rng, hid);
    const auto rh = random_vector(rng, hid), rc = random_vector(rng, hid);
    auto loss = [&] {
      std::vector<double> hn(hid), cn(hid);
      layers::lstm_forward(in, hid, wih, whh, b, x, h, c, hn, cn, nullptr);
      return dot(rh, hn) + dot(rc, cn);
    };
    layers::LstmCache cache;
    std::vector<double> hn(hid), cn(hid);
    layers::lstm_forward(in, hid, wih, whh, b, x, h, c, hn, cn, &cache);
    std::vector<double> dwih(wih.size(), 0.0), dwhh(whh.size(), 0.0), db(b.size(), 0.0), dx(in), dh(hid),
        dc(hid);
    layers::lstm_backward(in, hid, wih, whh, cache, rh, rc, dwih, dwhh, db, dx, dh, dc);
    track(r, max_rel_error(loss, wih, dwih));
    track(r, max_rel_error(loss, whh, dwhh));
    track(r, max_rel_error(loss, b, db));
    track(r, max_rel_error(loss, x, dx));
    track(r, max_rel_error(loss, h, dh));
    track(r, max_rel_error(loss, c, dc));
  }
  return r;
}

GradReport gaussian_gradients(std::uint64_t seed, int instances) {
  Rng rng(seed);
  GradReport r{instances, 0.0};
  for (int trial = 0; trial < instances; ++trial) {
    ActionVec mean{rng.uniform(-1, 1), rng.uniform(-1, 1)}, ls{rng.uniform(-2, 1), rng.uniform(-2, 1)};
    const ActionVec a{rng.uniform(-1, 2), rng.uniform(-1, 2)};
    ActionVec dm{}, dls{};
    gaussian_log_prob_grad(mean, ls, a, dm, dls);
    auto f = [&] { return gaussian_log_prob(mean, ls, a); };
    for (int k = 0; k < 2; ++k) {
      track(r, rel_error(dm[k], central_diff(f, mean[k])));
      track(r, rel_error(dls[k], central_diff(f, ls[k])));
    }
  }
  return r;
}

GradReport network_gradients(NetKind kind, std::uint64_t seed, int instances) {
  Rng rng(seed);
  GradReport r{instances, 0.0};
  NetConfig cfg = tiny_net(kind);
  cfg.conv1_filters = 4;
  cfg.conv2_filters = 4;
  cfg.dense_units = 16;
  cfg.lstm_units = 8;
  cfg.mlp_hidden = 12;
  cfg.log_std_init = 0.0;
  for (int trial = 0; trial < instances; ++trial) {
    PolicyNetwork net(cfg, trial);
    for (NamedTensor& p : net.mutable_parameters())
      for (double& v : p.tensor.span()) v = rng.uniform(-0.5, 0.5);
    Tensor obs(cfg.input_shape());
    for (double& v : obs.span()) v = rng.uniform(0, 1);
    RecurrentState state = net.initial_state();
    for (double& v : state.hidden) v = rng.uniform(-0.9, 0.9);
    for (double& v : state.cell) v = rng.uniform(-2, 2);
    const Projection p{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       {rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       rng.uniform(-1, 1)};
    ForwardCache cache;
    net.forward(obs, state, &cache);
    const TensorList grads = net.backward(cache, p.a, p.b, p.c);
    auto f = [&] { return project(net.forward(obs, state), p); };
    for (std::size_t t = 0; t < grads.size(); ++t)
      for (std::size_t i = 0; i < grads[t].tensor.size(); ++i)
        track(r, rel_error(grads[t].tensor[i], central_diff(f, net.mutable_parameters()[t].tensor[i])));
  }
  return r;
}

Batch make_batch(const PolicyNetwork& net, Rng& rng, const std::vector<std::pair<double, double>>& ratio_adv) {
  Batch b;
  const std::size_t n = ratio_adv.size();
  b.obs.reserve(n);
  b.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tensor t(net.config().input_shape());
    for (double& v : t.span()) v = rng.uniform();
    b.obs.push_back(std::move(t));
    RecurrentState s = net.initial_state();
    for (double& v : s.hidden) v = rng.uniform(-0.5, 0.5);
    for (double& v : s.cell) v = rng.uniform(-0.5, 0.5);
    b.states.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const PolicyOutput out = net.forward(b.obs[i], b.states[i]);
    const ActionVec a{out.mean[0] + rng.uniform(-1, 1), out.mean[1] + rng.uniform(-1, 1)};
    const double lp = gaussian_log_prob(out.mean, out.log_std, a);
    b.samples.push_back({&b.obs[i], &b.states[i], a, lp - std::log(ratio_adv[i].first), ratio_adv[i].second,
                         out.value + rng.uniform(-1, 1)});
  }
  return b;
}

GradReport ppo_loss_gradients(NetKind kind, std::uint64_t seed, int instances, std::size_t stride) {
  Rng rng(seed);
  GradReport r{instances, 0.0};
  for (int trial = 0; trial < instances; ++trial) {
    PolicyNetwork net(tiny_net(kind), trial);
    for (NamedTensor& p : net.mutable_parameters())
      for (double& v : p.tensor.span()) v += rng.uniform(-0.2, 0.2);
    std::vector<std::pair<double, double>> ra;
    for (int i = 0; i < 6; ++i) {
      // The surrogate has kinks at 1 +- clip; finite differences straddling one are meaningless.
      double ratio = rng.uniform(0.6, 1.4);
      while (std::fabs(ratio - 0.8) < 0.01 || std::fabs(ratio - 1.2) < 0.01) ratio = rng.uniform(0.6, 1.4);
      ra.push_back({ratio, rng.uniform(-2, 2)});
    }
    Batch b = make_batch(net, rng, ra);
    const LossResult l = ppo_loss(net, b.samples, 0.2, 0.5, 0.01, true);
    auto f = [&] { return ppo_loss(net, b.samples, 0.2, 0.5, 0.01, true).loss; };
    for (std::size_t t = 0; t < l.gradients.size(); ++t)
      for (std::size_t i = t % stride; i < l.gradients[t].tensor.size(); i += stride)
        track(r, rel_error(l.gradients[t].tensor[i], central_diff(f, net.mutable_parameters()[t].tensor[i])));
  }
  return r;
}

double max_abs(const TensorList& g) {
  double m = 0.0;
  for (const NamedTensor& t : g)
    for (double v : t.tensor.span()) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace svrl::testing
