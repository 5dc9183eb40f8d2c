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

#ifndef SVRL_ERRORS_HPP_
#define SVRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace svrl {

// Root of every exception thrown by the library. The C API maps each subclass
// onto an svrl_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling could not place the goal or an obstacle.
class UnsatisfiableConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite value produced inside an update.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace svrl

#endif  // SVRL_ERRORS_HPP_
