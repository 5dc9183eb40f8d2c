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

#ifndef SVRL_POLICY_HPP_
#define SVRL_POLICY_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svrl/layers.hpp"
#include "svrl/tensor.hpp"

namespace svrl {

enum class NetKind { Cnn, CnnLstm, Mlp };

const char* net_kind_name(NetKind kind);
NetKind parse_net_kind(std::string_view name);

// Network topology. The image variants are
//   conv(5x5/2) -> ReLU -> conv(3x3/2) -> ReLU -> dense -> ReLU [-> LSTM]
// followed by a Gaussian policy head and a scalar value head. The MLP variant
// replaces the image trunk with two dense+ReLU layers over a proprioceptive
// vector.
struct NetConfig {
  NetKind kind = NetKind::Cnn;
  int obs_channels = 3;
  int obs_height = 27;
  int obs_width = 48;
  int conv1_filters = 8;
  int conv1_kernel = 5;
  int conv1_stride = 2;
  int conv2_filters = 16;
  int conv2_kernel = 3;
  int conv2_stride = 2;
  int dense_units = 128;
  int lstm_units = 64;
  int mlp_inputs = 7;
  int mlp_hidden = 64;
  double log_std_init = 0.0;

  bool recurrent() const { return kind == NetKind::CnnLstm; }
  Shape input_shape() const;
  // Width of the vector the heads read.
  int feature_size() const;
  void validate() const;

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

inline constexpr int kActionDim = 2;
inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

using ActionVec = std::array<double, kActionDim>;

struct RecurrentState {
  std::vector<double> hidden;
  std::vector<double> cell;

  static RecurrentState zeros(int units);
  bool empty() const { return hidden.empty(); }

  friend bool operator==(const RecurrentState&, const RecurrentState&) = default;
};

struct PolicyOutput {
  ActionVec mean{};
  // Clamped into [kLogStdMin, kLogStdMax].
  ActionVec log_std{};
  double value = 0.0;
  RecurrentState state;
};

// Intermediates retained by forward() for one backward() call.
struct ForwardCache {
  std::uint64_t network_id = 0;
  std::uint64_t version = 0;
  bool valid = false;

  std::vector<double> input;
  std::vector<double> columns1, act1;
  std::vector<double> columns2, act2;
  std::vector<double> hidden1, hidden2;
  layers::LstmCache lstm;
  std::vector<double> features;
};

class PolicyNetwork {
 public:
  // Orthogonal weights drawn from init_seed, zero biases.
  PolicyNetwork(const NetConfig& config, std::uint64_t init_seed);
  // Adopts an existing parameter list; throws ShapeError on a layout mismatch.
  PolicyNetwork(const NetConfig& config, TensorList parameters);

  PolicyNetwork(const PolicyNetwork& other);
  PolicyNetwork& operator=(const PolicyNetwork& other);

  const NetConfig& config() const { return config_; }
  const TensorList& parameters() const { return params_; }
  // Mutable access invalidates outstanding forward caches.
  TensorList& mutable_parameters();
  std::size_t parameter_count() const { return element_count(params_); }

  RecurrentState initial_state() const;

  // Throws ShapeError when obs or state do not match the configuration.
  PolicyOutput forward(const Tensor& obs, const RecurrentState& state,
                       ForwardCache* cache = nullptr) const;

  // Reverse-mode gradient of d_mean.mean + d_log_std.log_std + d_value*value,
  // added into grads (which must share the parameter layout). Consumes the
  // cache; a consumed cache or one from before a parameter change throws
  // ContractViolation.
  void backward_accumulate(ForwardCache& cache, const ActionVec& d_mean, const ActionVec& d_log_std,
                           double d_value, TensorList& grads) const;
  TensorList backward(ForwardCache& cache, const ActionVec& d_mean, const ActionVec& d_log_std,
                      double d_value) const;

  // Empty layout with the parameter names and shapes.
  static TensorList make_layout(const NetConfig& config);

 private:
  void resolve_slots();
  layers::ConvGeometry conv1_geometry() const;
  layers::ConvGeometry conv2_geometry() const;

  NetConfig config_;
  TensorList params_;
  std::uint64_t id_ = 0;
  std::uint64_t version_ = 0;
  // Indices into params_.
  std::vector<std::size_t> slot_;
};

// Diagonal Gaussian helpers over the two action dimensions.
double gaussian_log_prob(const ActionVec& mean, const ActionVec& log_std, const ActionVec& action);
double gaussian_entropy(const ActionVec& log_std);
// Partial derivatives of gaussian_log_prob.
void gaussian_log_prob_grad(const ActionVec& mean, const ActionVec& log_std, const ActionVec& action,
                            ActionVec& d_mean, ActionVec& d_log_std);

}  // namespace svrl

#endif  // SVRL_POLICY_HPP_
