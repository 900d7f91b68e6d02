// Copyright 2026 The fairlabel Authors.
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

#ifndef FAIRLABEL_COMMON_HPP_
#define FAIRLABEL_COMMON_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairlabel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an input violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when the classifier fails to train (non-finite objective etc.).
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Exponent clamp shared by every exp-tilt in the library (weights and the
/// bias generator) so that round trips stay exact whenever neither side binds.
inline constexpr double kExponentClamp = 50.0;

inline double ClampExponent(double a) {
  if (a > kExponentClamp) return kExponentClamp;
  if (a < -kExponentClamp) return -kExponentClamp;
  return a;
}

}  // namespace fairlabel

#endif  // FAIRLABEL_COMMON_HPP_
