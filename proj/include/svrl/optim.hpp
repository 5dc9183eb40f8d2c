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

#ifndef SVRL_OPTIM_HPP_
#define SVRL_OPTIM_HPP_

#include <cstdint>

#include "svrl/tensor.hpp"

namespace svrl {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  TensorList first_moment;
  TensorList second_moment;

  // Zeroed moments laid out like params.
  static AdamState for_parameters(const TensorList& params);
};

// Bias-corrected Adam update in place. Throws ShapeError when params, grads
// and moments disagree.
void adam_step(TensorList& params, const TensorList& grads, AdamState& state, double learning_rate);

// Rescales every gradient by max_norm / norm when the global L2 norm exceeds
// max_norm. Returns the norm measured before clipping.
double clip_grad_norm(TensorList& grads, double max_norm);

}  // namespace svrl

#endif  // SVRL_OPTIM_HPP_
