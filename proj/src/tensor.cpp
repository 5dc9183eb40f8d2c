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

#include "svrl/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "svrl/errors.hpp"

namespace svrl {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_))
    throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                     shape_string(shape_));
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void Tensor::reshape(Shape shape) {
  if (shape_size(shape) != data_.size())
    throw ShapeError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  shape_ = std::move(shape);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

TensorList zeros_like(const TensorList& list) {
  TensorList out;
  out.reserve(list.size());
  for (const NamedTensor& nt : list) out.push_back({nt.name, Tensor(nt.tensor.shape())});
  return out;
}

void require_same_layout(const TensorList& a, const TensorList& b, const char* context) {
  if (a.size() != b.size())
    throw ShapeError(std::string(context) + ": tensor list lengths differ (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].tensor.shape() != b[i].tensor.shape())
      throw ShapeError(std::string(context) + ": entry " + std::to_string(i) + " is " + a[i].name +
                       shape_string(a[i].tensor.shape()) + " vs " + b[i].name +
                       shape_string(b[i].tensor.shape()));
  }
}

std::size_t element_count(const TensorList& list) {
  std::size_t n = 0;
  for (const NamedTensor& nt : list) n += nt.tensor.size();
  return n;
}

double global_l2_norm(const TensorList& list) {
  double sum = 0.0;
  for (const NamedTensor& nt : list)
    for (double v : nt.tensor.values()) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace svrl
