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

#ifndef FAIRLABEL_REWEIGH_HPP_
#define FAIRLABEL_REWEIGH_HPP_

#include <cstdint>
#include <vector>

#include "fairlabel/classifier.hpp"
#include "fairlabel/common.hpp"
#include "fairlabel/constraints.hpp"
#include "fairlabel/dataset.hpp"

namespace fairlabel {

/// Per-group multipliers. Single-block for demographic parity, disparate
/// impact and equal opportunity; paired true-positive / false-positive
/// blocks for equalized odds.
class Multipliers {
 public:
  static Multipliers Single(Vector lambda);
  static Multipliers Paired(Vector true_positive, Vector false_positive);
  /// All-zero multipliers shaped for `notion`.
  static Multipliers Zeros(FairnessNotion notion, Eigen::Index groups);

  bool paired() const { return paired_; }
  Eigen::Index group_count() const { return primary_.size(); }
  /// lambda, or lambda^TP when paired.
  const Vector& primary() const { return primary_; }
  /// lambda^FP; empty unless paired.
  const Vector& false_positive() const { return false_positive_; }

  /// Blocks concatenated in violation-vector order.
  Vector Flat() const;

 private:
  Multipliers(Vector primary, Vector false_positive, bool paired);

  Vector primary_;
  Vector false_positive_;
  bool paired_;
};

struct ReweighConfig {
  double eta = 1.0;
  int loops = 100;
};

void Validate(const ReweighConfig& cfg);

/// Normalized two-outcome weight for exponent `a` (clamped to +-50):
/// e^a / (1 + e^a) for label 1 and 1 / (1 + e^a) for label 0. The smaller
/// of the two is computed directly and the other as its complement, so the
/// pair sums to exactly 1.
double WeightFromExponent(double a, int label);

/// Weight of one example: exponent sum_k lambda_k * membership_k.
double ExampleWeight(const Multipliers& lambda, const Vector& membership,
                     int label);

/// Equalized-odds weight: positives use exp(sum lambda^TP g) / (1 + ...),
/// negatives use exp(-sum lambda^FP g) / (1 + ...).
double ExampleWeightEqualizedOdds(const Multipliers& lambda,
                                  const Vector& membership, int label);

/// Dispatches on the multiplier shape.
Vector ComputeWeights(const Multipliers& lambda, const LabeledDataset& ds);

/// lambda <- lambda - eta * delta, blockwise.
Multipliers UpdateMultipliers(const Multipliers& lambda, const Vector& delta,
                              double eta);

struct FitResult {
  ModelParams model;
  Multipliers multipliers;
  /// Soft-score violation of the model after 0, 1, ..., T retrains.
  std::vector<Vector> trace;
};

/// Learns multipliers and a classifier by alternating violation evaluation,
/// multiplier updates and full retraining on reweighted examples. Uses the
/// paired (equalized odds) weights when `cs` is equalized odds. Disparate
/// impact expects features already masked by the caller.
FitResult Fit(const LabeledDataset& ds, const ConstraintSet& cs,
              const ReweighConfig& rcfg, const TrainConfig& tcfg);

/// Accept/reject alternative to weighting: example i is kept iff an auxiliary
/// label drawn with P(y' = 1) = ExampleWeight(lambda, g_i, 1) equals y_i.
/// Paired multipliers keep example i with probability
/// ExampleWeightEqualizedOdds(lambda, g_i, y_i). Deterministic given seed.
Vector SamplingMask(const Multipliers& lambda, const LabeledDataset& ds,
                    std::uint64_t seed);

/// Same loop as Fit, but each retrain uses a fresh sampling mask (seeded with
/// seed + iteration) instead of fractional weights.
FitResult FitSampling(const LabeledDataset& ds, const ConstraintSet& cs,
                      const ReweighConfig& rcfg, const TrainConfig& tcfg,
                      std::uint64_t seed);

}  // namespace fairlabel

#endif  // FAIRLABEL_REWEIGH_HPP_
