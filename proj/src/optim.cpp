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

#include "svrl/optim.hpp"

#include <cmath>

#include "svrl/errors.hpp"

namespace svrl {

AdamState AdamState::for_parameters(const TensorList& params) {
  AdamState state;
  state.first_moment = zeros_like(params);
  state.second_moment = zeros_like(params);
  return state;
}

void adam_step(TensorList& params, const TensorList& grads, AdamState& state, double learning_rate) {
  require_same_layout(params, grads, "adam_step gradients");
  require_same_layout(params, state.first_moment, "adam_step first moment");
  require_same_layout(params, state.second_moment, "adam_step second moment");
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = params[i].tensor;
    const Tensor& g = grads[i].tensor;
    Tensor& m = state.first_moment[i].tensor;
    Tensor& v = state.second_moment[i].tensor;
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      p[k] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

double clip_grad_norm(TensorList& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw ConfigError("clip_grad_norm requires max_norm > 0");
  const double norm = global_l2_norm(grads);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (NamedTensor& nt : grads)
      for (double& v : nt.tensor.span()) v *= scale;
  }
  return norm;
}

}  // namespace svrl
