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

#ifndef FAIRLABEL_CLASSIFIER_HPP_
#define FAIRLABEL_CLASSIFIER_HPP_

#include <string_view>
#include <vector>

#include "fairlabel/common.hpp"
#include "fairlabel/dataset.hpp"

namespace fairlabel {

/// Weighted L2-regularized logistic regression.
///
/// Training minimizes
///
///   (1 / sum w) * sum_i w_i * logloss(sigmoid(beta . x_i + b), y_i)
///       + l2_strength * |beta|^2
///
/// from zero initialization. The intercept is not penalized. Because the
/// loss is normalized by the weight sum, scaling all weights leaves the
/// minimizer unchanged.

struct ModelParams {
  Vector coefficients;
  double intercept = 0.0;
};

bool operator==(const ModelParams& a, const ModelParams& b);

enum class Solver {
  /// Full-batch gradient descent with `step_size`; the step is halved
  /// whenever it would increase the objective.
  kGradientDescent,
  /// Damped Newton with Armijo backtracking.
  kNewton,
};

std::string_view ToString(Solver solver);
Solver ParseSolver(std::string_view name);

struct TrainConfig {
  double l2_strength = 1e-4;
  int max_iterations = 5000;
  double step_size = 0.5;
  double gradient_tolerance = 1e-7;
  Solver solver = Solver::kNewton;

  /// Penalty equivalent to an unweighted unit-C logistic regression on
  /// `rows` examples: 0.5 |beta|^2 + sum logloss, divided by `rows`.
  static TrainConfig UnitPenaltyFor(Eigen::Index rows);
};

void Validate(const TrainConfig& cfg);

struct TrainResult {
  ModelParams params;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  /// Objective before each step and after the last one (size iterations+1).
  std::vector<double> objective_trace;
};

/// Throws InvalidArgument for negative, non-finite or all-zero weights and
/// TrainingError (with the iteration index) if the objective diverges.
TrainResult TrainWeightedDetailed(const LabeledDataset& ds,
                                  const Vector& weights,
                                  const TrainConfig& cfg);

ModelParams TrainWeighted(const LabeledDataset& ds, const Vector& weights,
                          const TrainConfig& cfg);

/// Training objective at `m`.
double WeightedObjective(const ModelParams& m, const LabeledDataset& ds,
                         const Vector& weights, const TrainConfig& cfg);

/// Gradient of the training objective: d coefficient entries then the
/// intercept.
Vector WeightedGradient(const ModelParams& m, const LabeledDataset& ds,
                        const Vector& weights, const TrainConfig& cfg);

/// sigmoid(beta . x + b), with the affine score clamped to +-35 so results
/// stay strictly inside (0, 1).
Vector PredictProba(const ModelParams& m, const Matrix& features);

/// 1 iff probability >= 0.5.
Vector PredictLabel(const ModelParams& m, const Matrix& features);

/// Fraction of rows where the hard prediction differs from `labels`.
double ErrorRate(const Vector& predictions, const Vector& labels);

}  // namespace fairlabel

#endif  // FAIRLABEL_CLASSIFIER_HPP_
