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

#include "svrl/policy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "svrl/errors.hpp"
#include "svrl/random.hpp"

namespace svrl {
namespace {

enum Slot : std::size_t {
  kConv1W, kConv1B, kConv2W, kConv2B, kFcW, kFcB,
  kLstmWih, kLstmWhh, kLstmB,
  kMlp1W, kMlp1B, kMlp2W, kMlp2B,
  kPolicyW, kPolicyB, kLogStd, kValueW, kValueB,
  kSlotCount
};

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

const char* slot_name(Slot s) {
  static constexpr const char* kNames[kSlotCount] = {
      "conv1.weight", "conv1.bias", "conv2.weight", "conv2.bias", "fc.weight", "fc.bias",
      "lstm.weight_ih", "lstm.weight_hh", "lstm.bias",
      "mlp1.weight", "mlp1.bias", "mlp2.weight", "mlp2.bias",
      "policy.weight", "policy.bias", "policy.log_std", "value.weight", "value.bias"};
  return kNames[s];
}

std::uint64_t next_network_id() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

layers::ConvGeometry conv_geometry(std::size_t c, std::size_t h, std::size_t w, int filters, int kernel,
                                   int stride) {
  return {c, h, w, static_cast<std::size_t>(filters), static_cast<std::size_t>(kernel),
          static_cast<std::size_t>(stride)};
}

// Rows x cols matrix with orthonormal rows or columns (whichever is shorter),
// scaled by gain.
void orthogonal_init(Tensor& weight, std::size_t rows, std::size_t cols, double gain, Rng& rng) {
  const std::size_t n = std::max(rows, cols), m = std::min(rows, cols);
  // Columns of an n x m Gaussian matrix, orthonormalized by modified Gram-Schmidt.
  std::vector<std::vector<double>> basis(m, std::vector<double>(n));
  for (auto& v : basis)
    for (double& x : v) x = rng.normal();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += basis[j][i] * basis[k][i];
      for (std::size_t i = 0; i < n; ++i) basis[j][i] -= proj * basis[k][i];
    }
    double norm = 0.0;
    for (double x : basis[j]) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : basis[j]) x /= norm;
  }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      weight[r * cols + c] = gain * (rows >= cols ? basis[c][r] : basis[r][c]);
}

}  // namespace

const char* net_kind_name(NetKind kind) {
  switch (kind) {
    case NetKind::Cnn: return "cnn";
    case NetKind::CnnLstm: return "cnn-lstm";
    case NetKind::Mlp: return "mlp";
  }
  return "cnn";
}

NetKind parse_net_kind(std::string_view name) {
  for (NetKind k : {NetKind::Cnn, NetKind::CnnLstm, NetKind::Mlp})
    if (name == net_kind_name(k)) return k;
  throw ConfigError("unknown network kind '" + std::string(name) + "' (expected cnn, cnn-lstm or mlp)");
}

Shape NetConfig::input_shape() const {
  if (kind == NetKind::Mlp) return {static_cast<std::size_t>(mlp_inputs)};
  return {static_cast<std::size_t>(obs_channels), static_cast<std::size_t>(obs_height),
          static_cast<std::size_t>(obs_width)};
}

int NetConfig::feature_size() const {
  switch (kind) {
    case NetKind::Cnn: return dense_units;
    case NetKind::CnnLstm: return lstm_units;
    case NetKind::Mlp: return mlp_hidden;
  }
  return dense_units;
}

void NetConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid network config: ") + what);
  };
  require(dense_units > 0 && lstm_units > 0 && mlp_hidden > 0 && mlp_inputs > 0, "layer widths must be positive");
  require(log_std_init >= kLogStdMin && log_std_init <= kLogStdMax, "log_std_init outside [-5, 2]");
  if (kind == NetKind::Mlp) return;
  require(obs_channels > 0, "obs_channels must be positive");
  require(conv1_filters > 0 && conv2_filters > 0, "filter counts must be positive");
  require(conv1_kernel > 0 && conv2_kernel > 0 && conv1_stride > 0 && conv2_stride > 0,
          "kernel sizes and strides must be positive");
  const auto c1 = conv_geometry(obs_channels, obs_height, obs_width, conv1_filters, conv1_kernel, conv1_stride);
  require(c1.valid(), "observation smaller than the first convolution kernel");
  const auto c2 = conv_geometry(conv1_filters, c1.out_height(), c1.out_width(), conv2_filters, conv2_kernel,
                                conv2_stride);
  require(c2.valid(), "first convolution output smaller than the second kernel");
}

RecurrentState RecurrentState::zeros(int units) {
  return {std::vector<double>(units, 0.0), std::vector<double>(units, 0.0)};
}

TensorList PolicyNetwork::make_layout(const NetConfig& config) {
  config.validate();
  TensorList layout;
  auto add = [&layout](Slot s, Shape shape) { layout.push_back({slot_name(s), Tensor(std::move(shape))}); };
  const std::size_t feature = config.feature_size();
  if (config.kind == NetKind::Mlp) {
    const std::size_t hidden = config.mlp_hidden;
    add(kMlp1W, {hidden, static_cast<std::size_t>(config.mlp_inputs)});
    add(kMlp1B, {hidden});
    add(kMlp2W, {hidden, hidden});
    add(kMlp2B, {hidden});
  } else {
    const auto c1 = conv_geometry(config.obs_channels, config.obs_height, config.obs_width, config.conv1_filters,
                                  config.conv1_kernel, config.conv1_stride);
    const auto c2 = conv_geometry(config.conv1_filters, c1.out_height(), c1.out_width(), config.conv2_filters,
                                  config.conv2_kernel, config.conv2_stride);
    const std::size_t dense = config.dense_units;
    add(kConv1W, {c1.out_channels, c1.in_channels, c1.kernel, c1.kernel});
    add(kConv1B, {c1.out_channels});
    add(kConv2W, {c2.out_channels, c2.in_channels, c2.kernel, c2.kernel});
    add(kConv2B, {c2.out_channels});
    add(kFcW, {dense, c2.output_size()});
    add(kFcB, {dense});
    if (config.recurrent()) {
      const std::size_t units = config.lstm_units;
      add(kLstmWih, {4 * units, dense});
      add(kLstmWhh, {4 * units, units});
      add(kLstmB, {4 * units});
    }
  }
  add(kPolicyW, {static_cast<std::size_t>(kActionDim), feature});
  add(kPolicyB, {static_cast<std::size_t>(kActionDim)});
  add(kLogStd, {static_cast<std::size_t>(kActionDim)});
  add(kValueW, {1, feature});
  add(kValueB, {1});
  return layout;
}

PolicyNetwork::PolicyNetwork(const NetConfig& config, std::uint64_t init_seed)
    : config_(config), params_(make_layout(config)), id_(next_network_id()) {
  resolve_slots();
  Rng rng(init_seed);
  const double relu_gain = std::numbers::sqrt2;
  auto init = [&](Slot s, double gain) {
    Tensor& t = params_[slot_[s]].tensor;
    const std::size_t rows = t.dim(0);
    orthogonal_init(t, rows, t.size() / rows, gain, rng);
  };
  if (config_.kind == NetKind::Mlp) {
    init(kMlp1W, relu_gain);
    init(kMlp2W, relu_gain);
  } else {
    init(kConv1W, relu_gain);
    init(kConv2W, relu_gain);
    init(kFcW, relu_gain);
    if (config_.recurrent()) {
      init(kLstmWih, 1.0);
      init(kLstmWhh, 1.0);
    }
  }
  init(kPolicyW, 0.01);
  init(kValueW, 1.0);
  params_[slot_[kLogStd]].tensor.fill(config_.log_std_init);
}

PolicyNetwork::PolicyNetwork(const NetConfig& config, TensorList parameters)
    : config_(config), params_(std::move(parameters)), id_(next_network_id()) {
  require_same_layout(make_layout(config_), params_, "policy parameters");
  resolve_slots();
}

PolicyNetwork::PolicyNetwork(const PolicyNetwork& other)
    : config_(other.config_), params_(other.params_), id_(next_network_id()), slot_(other.slot_) {}

PolicyNetwork& PolicyNetwork::operator=(const PolicyNetwork& other) {
  if (this != &other) {
    config_ = other.config_;
    params_ = other.params_;
    slot_ = other.slot_;
    ++version_;
  }
  return *this;
}

void PolicyNetwork::resolve_slots() {
  slot_.assign(kSlotCount, kNoSlot);
  for (std::size_t i = 0; i < params_.size(); ++i)
    for (std::size_t s = 0; s < kSlotCount; ++s)
      if (params_[i].name == slot_name(static_cast<Slot>(s))) slot_[s] = i;
}

TensorList& PolicyNetwork::mutable_parameters() {
  ++version_;
  return params_;
}

RecurrentState PolicyNetwork::initial_state() const {
  return config_.recurrent() ? RecurrentState::zeros(config_.lstm_units) : RecurrentState{};
}

layers::ConvGeometry PolicyNetwork::conv1_geometry() const {
  return conv_geometry(config_.obs_channels, config_.obs_height, config_.obs_width, config_.conv1_filters,
                       config_.conv1_kernel, config_.conv1_stride);
}

layers::ConvGeometry PolicyNetwork::conv2_geometry() const {
  const auto c1 = conv1_geometry();
  return conv_geometry(config_.conv1_filters, c1.out_height(), c1.out_width(), config_.conv2_filters,
                       config_.conv2_kernel, config_.conv2_stride);
}

PolicyOutput PolicyNetwork::forward(const Tensor& obs, const RecurrentState& state, ForwardCache* cache) const {
  if (obs.shape() != config_.input_shape())
    throw ShapeError("observation shape " + shape_string(obs.shape()) + " does not match network input " +
                     shape_string(config_.input_shape()));
  if (config_.recurrent() && (state.hidden.size() != static_cast<std::size_t>(config_.lstm_units) ||
                              state.cell.size() != static_cast<std::size_t>(config_.lstm_units)))
    throw ShapeError("recurrent state does not match lstm_units");

  auto p = [this](Slot s) { return params_[slot_[s]].tensor.span(); };
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  PolicyOutput out;
  out.state = state;

  if (config_.kind == NetKind::Mlp) {
    const std::size_t hidden = config_.mlp_hidden;
    c.input.assign(obs.values().begin(), obs.values().end());
    c.hidden1.resize(hidden);
    c.hidden2.resize(hidden);
    layers::dense_forward(p(kMlp1W), p(kMlp1B), c.input, c.hidden1);
    layers::relu_forward(c.hidden1);
    layers::dense_forward(p(kMlp2W), p(kMlp2B), c.hidden1, c.hidden2);
    layers::relu_forward(c.hidden2);
    c.features = c.hidden2;
  } else {
    const auto g1 = conv1_geometry();
    const auto g2 = conv2_geometry();
    c.input.assign(obs.values().begin(), obs.values().end());
    layers::im2col(g1, c.input, c.columns1);
    c.act1.resize(g1.output_size());
    layers::conv2d_forward(g1, p(kConv1W), p(kConv1B), c.columns1, c.act1);
    layers::relu_forward(c.act1);
    layers::im2col(g2, c.act1, c.columns2);
    c.act2.resize(g2.output_size());
    layers::conv2d_forward(g2, p(kConv2W), p(kConv2B), c.columns2, c.act2);
    layers::relu_forward(c.act2);
    c.hidden1.resize(config_.dense_units);
    layers::dense_forward(p(kFcW), p(kFcB), c.act2, c.hidden1);
    layers::relu_forward(c.hidden1);
    if (config_.recurrent()) {
      const std::size_t units = config_.lstm_units;
      out.state.hidden.assign(units, 0.0);
      out.state.cell.assign(units, 0.0);
      layers::lstm_forward(config_.dense_units, units, p(kLstmWih), p(kLstmWhh), p(kLstmB), c.hidden1,
                           state.hidden, state.cell, out.state.hidden, out.state.cell, &c.lstm);
      c.features = out.state.hidden;
    } else {
      c.features = c.hidden1;
    }
  }

  layers::dense_forward(p(kPolicyW), p(kPolicyB), c.features, out.mean);
  std::array<double, 1> value{};
  layers::dense_forward(p(kValueW), p(kValueB), c.features, value);
  out.value = value[0];
  const auto log_std = p(kLogStd);
  for (int k = 0; k < kActionDim; ++k) out.log_std[k] = std::clamp(log_std[k], kLogStdMin, kLogStdMax);

  if (cache) {
    cache->network_id = id_;
    cache->version = version_;
    cache->valid = true;
  }
  return out;
}

void PolicyNetwork::backward_accumulate(ForwardCache& cache, const ActionVec& d_mean,
                                        const ActionVec& d_log_std, double d_value, TensorList& grads) const {
  if (!cache.valid) throw ContractViolation("backward called with a consumed or empty forward cache");
  if (cache.network_id != id_ || cache.version != version_)
    throw ContractViolation("backward called with a cache from a different parameter state");
  require_same_layout(params_, grads, "gradient accumulator");
  cache.valid = false;

  auto p = [this](Slot s) { return params_[slot_[s]].tensor.span(); };
  auto g = [this, &grads](Slot s) { return grads[slot_[s]].tensor.span(); };

  const std::size_t feature = config_.feature_size();
  std::vector<double> d_features(feature, 0.0);
  std::vector<double> tmp(feature);
  layers::dense_backward(p(kPolicyW), cache.features, d_mean, g(kPolicyW), g(kPolicyB), d_features);
  const std::array<double, 1> dv{d_value};
  layers::dense_backward(p(kValueW), cache.features, dv, g(kValueW), g(kValueB), tmp);
  for (std::size_t i = 0; i < feature; ++i) d_features[i] += tmp[i];

  const auto raw_log_std = p(kLogStd);
  auto d_ls = g(kLogStd);
  for (int k = 0; k < kActionDim; ++k)
    if (raw_log_std[k] > kLogStdMin && raw_log_std[k] < kLogStdMax) d_ls[k] += d_log_std[k];

  if (config_.kind == NetKind::Mlp) {
    std::vector<double> d_h1(config_.mlp_hidden);
    layers::relu_backward(cache.hidden2, d_features);
    layers::dense_backward(p(kMlp2W), cache.hidden1, d_features, g(kMlp2W), g(kMlp2B), d_h1);
    layers::relu_backward(cache.hidden1, d_h1);
    layers::dense_backward(p(kMlp1W), cache.input, d_h1, g(kMlp1W), g(kMlp1B), {});
    return;
  }

  std::vector<double> d_hidden;
  if (config_.recurrent()) {
    d_hidden.assign(config_.dense_units, 0.0);
    layers::lstm_backward(config_.dense_units, config_.lstm_units, p(kLstmWih), p(kLstmWhh), cache.lstm, d_features,
                          {}, g(kLstmWih), g(kLstmWhh), g(kLstmB), d_hidden, {}, {});
  } else {
    d_hidden = std::move(d_features);
  }
  layers::relu_backward(cache.hidden1, d_hidden);
  const auto g1 = conv1_geometry();
  const auto g2 = conv2_geometry();
  std::vector<double> d_act2(g2.output_size());
  layers::dense_backward(p(kFcW), cache.act2, d_hidden, g(kFcW), g(kFcB), d_act2);
  layers::relu_backward(cache.act2, d_act2);
  std::vector<double> d_act1(g1.output_size());
  layers::conv2d_backward(g2, p(kConv2W), cache.columns2, d_act2, g(kConv2W), g(kConv2B), d_act1);
  layers::relu_backward(cache.act1, d_act1);
  layers::conv2d_backward(g1, p(kConv1W), cache.columns1, d_act1, g(kConv1W), g(kConv1B), {});
}

TensorList PolicyNetwork::backward(ForwardCache& cache, const ActionVec& d_mean, const ActionVec& d_log_std,
                                   double d_value) const {
  TensorList grads = zeros_like(params_);
  backward_accumulate(cache, d_mean, d_log_std, d_value, grads);
  return grads;
}

double gaussian_log_prob(const ActionVec& mean, const ActionVec& log_std, const ActionVec& action) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  double total = 0.0;
  for (int k = 0; k < kActionDim; ++k) {
    const double z = (action[k] - mean[k]) * std::exp(-log_std[k]);
    total += -0.5 * z * z - log_std[k] - kHalfLog2Pi;
  }
  return total;
}

double gaussian_entropy(const ActionVec& log_std) {
  // 0.5 * ln(2 * pi * e)
  constexpr double kHalfLog2PiE = 1.41893853320467274178;
  double total = 0.0;
  for (double ls : log_std) total += kHalfLog2PiE + ls;
  return total;
}

void gaussian_log_prob_grad(const ActionVec& mean, const ActionVec& log_std, const ActionVec& action,
                            ActionVec& d_mean, ActionVec& d_log_std) {
  for (int k = 0; k < kActionDim; ++k) {
    const double inv_std = std::exp(-log_std[k]);
    const double z = (action[k] - mean[k]) * inv_std;
    d_mean[k] = z * inv_std;
    d_log_std[k] = z * z - 1.0;
  }
}

}  // namespace svrl
