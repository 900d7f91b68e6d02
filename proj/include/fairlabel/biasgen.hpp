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

#ifndef FAIRLABEL_BIASGEN_HPP_
#define FAIRLABEL_BIASGEN_HPP_

#include <cstdint>
#include <filesystem>

#include "fairlabel/common.hpp"
#include "fairlabel/dataset.hpp"

namespace fairlabel {

// Synthetic label-bias generator.
//
// A true label function y_true(x) is tilted into an observed one by
//
//   y_bias(y | x)  ~  y_true(y | x) * exp(-sum_k lambda_k c_k(x, y))
//
// and undone by the inverse tilt exp(+sum_k lambda_k c_k(x, y)). Both
// labels' constraint values are explicit arguments; c(x, 0) is 0 for every
// constraint this library generates.

/// How c_k(x, 1) is built from group membership.
enum class TiltForm {
  /// c_k(x, 1) = g_k(x). The form the reweigher's example weights invert.
  kIndicator,
  /// c_k(x, 1) = g_k(x) / Z_k - 1 with Z_k the population group fraction.
  kDemographicParity,
};

/// Observed-label probability for one example. The exponents
/// a1 = lambda . c1 and a0 = lambda . c0 are clamped to +-50.
double BiasScore(double true_score, const Vector& c1, const Vector& c0,
                 const Vector& lambda);

/// Inverse tilt: recovers y_true(1 | x) from y_bias(1 | x).
double DebiasScore(double bias_score, const Vector& c1, const Vector& c0,
                   const Vector& lambda);

/// c(x, 1) for every group given a membership row.
Vector TiltValues(TiltForm form, const Vector& membership,
                  double group_fraction);

struct GeneratorConfig {
  Eigen::Index n = 10000;
  /// Number of standard-normal feature columns.
  Eigen::Index d = 5;
  double group_fraction = 0.3;
  /// One injected coefficient per group.
  Vector lambda_star = Vector::Zero(1);
  TiltForm tilt = TiltForm::kIndicator;
  /// Norm of the true coefficient vector beta0.
  double signal_strength = 4.0;
  /// Seeds the examples.
  std::uint64_t seed = 0;
  /// Seeds beta0 only, so that tasks generated with different `seed` share
  /// the same true label function.
  std::uint64_t model_seed = 0;
};

/// Generated data plus the quantities only a simulator knows.
struct SyntheticTask {
  /// Features are d standard normals followed by the K group indicators;
  /// labels are drawn from y_bias.
  LabeledDataset dataset;
  /// y_true(1 | x_i).
  Vector true_scores;
  /// y_bias(1 | x_i).
  Vector bias_scores;
  /// Labels drawn from y_true with the same uniforms as the observed labels.
  Vector true_labels;
  /// c_k(x_i, 1), n x K.
  Matrix tilt_values;
  GeneratorConfig config;
};

/// Features ~ N(0, I_d), memberships ~ Bernoulli(group_fraction)
/// independently per group, true scores sigmoid(beta0 . x). A sample with an
/// empty or full group is redrawn with seed + 1 (at most 16 attempts).
SyntheticTask Generate(const GeneratorConfig& cfg);

/// max_i |DebiasScore(bias_i) - true_i| using the task's own tilt values.
double DebiasCheck(const SyntheticTask& task, const Vector& lambda);

/// Writes x0..x{d-1}, group_0..group_{K-1}, label, true_score, true_label.
void WriteTaskCsv(const SyntheticTask& task, const std::filesystem::path& path);

}  // namespace fairlabel

#endif  // FAIRLABEL_BIASGEN_HPP_
