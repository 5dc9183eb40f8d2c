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

#ifndef SVRL_TESTS_GRADCHECK_HPP_
#define SVRL_TESTS_GRADCHECK_HPP_

// Finite-difference helpers shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <vector>

#include "svrl/random.hpp"

namespace svrl::testing {

inline constexpr double kFdStep = 1e-5;
// Relative error is measured against max(|a|, |n|, kRelFloor) so components
// that are zero analytically do not divide by rounding noise.
inline constexpr double kRelFloor = 1e-4;

inline double rel_error(double analytic, double numeric) {
  return std::fabs(analytic - numeric) / std::max({std::fabs(analytic), std::fabs(numeric), kRelFloor});
}

// Central difference of f() with respect to the value at x.
template <typename F>
double central_diff(F&& f, double& x, double h = kFdStep) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Largest relative error over every coordinate of x.
template <typename F>
double max_rel_error(F&& f, std::vector<double>& x, const std::vector<double>& analytic) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, rel_error(analytic[i], central_diff(f, x[i])));
  return worst;
}

}  // namespace svrl::testing

#endif  // SVRL_TESTS_GRADCHECK_HPP_
