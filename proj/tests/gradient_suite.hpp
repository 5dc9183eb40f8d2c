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

#ifndef SVRL_TESTS_GRADIENT_SUITE_HPP_
#define SVRL_TESTS_GRADIENT_SUITE_HPP_

// Randomised finite-difference checks over each differentiable component.
// Every routine returns the worst relative error seen across its instances.

#include <cstdint>
#include <utility>
#include <vector>

#include "svrl/policy.hpp"
#include "svrl/ppo.hpp"
#include "svrl/random.hpp"

namespace svrl::testing {

struct GradReport {
  int instances = 0;
  double worst = 0.0;
};

GradReport dense_gradients(std::uint64_t seed, int instances);
GradReport conv_gradients(std::uint64_t seed, int instances);
GradReport lstm_gradients(std::uint64_t seed, int instances);
GradReport gaussian_gradients(std::uint64_t seed, int instances);
// Full network (all parameters) for one family at a small resolution.
GradReport network_gradients(NetKind kind, std::uint64_t seed, int instances);
// Full clipped PPO loss w.r.t. the parameters; `stride` samples every n-th coordinate.
GradReport ppo_loss_gradients(NetKind kind, std::uint64_t seed, int instances, std::size_t stride);

NetConfig tiny_net(NetKind kind = NetKind::Cnn);

// Samples whose stored log-probs put the current ratio exactly where asked.
struct Batch {
  std::vector<Tensor> obs;
  std::vector<RecurrentState> states;
  std::vector<PpoSample> samples;
};

Batch make_batch(const PolicyNetwork& net, Rng& rng, const std::vector<std::pair<double, double>>& ratio_adv);

double max_abs(const TensorList& g);

}  // namespace svrl::testing

#endif  // SVRL_TESTS_GRADIENT_SUITE_HPP_
