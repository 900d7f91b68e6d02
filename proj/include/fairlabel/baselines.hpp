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

#ifndef FAIRLABEL_BASELINES_HPP_
#define FAIRLABEL_BASELINES_HPP_

#include <map>
#include <string>

#include "fairlabel/classifier.hpp"
#include "fairlabel/constraints.hpp"
#include "fairlabel/dataset.hpp"

namespace fairlabel {

/// Uniform-weight training.
ModelParams TrainUnconstrained(const LabeledDataset& ds, const TrainConfig& cfg);

/// A base model with one decision threshold per group-intersection cell.
struct CalibratedModel {
  ModelParams base;
  /// Keyed by membership bitstring, e.g. "0110" for K = 4.
  std::map<std::string, double> thresholds;
};

/// Cells with fewer training rows than this keep the 0.5 threshold.
inline constexpr Eigen::Index kMinCalibrationCell = 5;

/// Membership bitstring of row `i`.
std::string CellSignature(const Matrix& groups, Eigen::Index i);

/// Post-processing calibration for demographic parity or equal opportunity.
///
/// Starting from 0.5 everywhere, each cell's threshold is chosen by
/// coordinate descent (cells in signature order, repeated until no cell
/// changes) from the cell's own predicted probabilities plus 0.5, minimizing
/// the training max |Delta_k| of hard predictions. Ties go to the threshold
/// closest to 0.5. The result never has a larger training max-violation than
/// plain 0.5 thresholding.
CalibratedModel Calibrate(const ModelParams& m, const LabeledDataset& ds,
                          const ConstraintSet& cs);

/// 1 iff probability >= the row's cell threshold (0.5 for unseen cells).
Vector PredictCalibrated(const CalibratedModel& cm, const Matrix& features,
                         const Matrix& groups);

}  // namespace fairlabel

#endif  // FAIRLABEL_BASELINES_HPP_
