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

#include "fairlabel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fairlabel {
namespace {

constexpr double kTieTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

struct Cell {
  std::string signature;
  // Row indices sorted by descending probability.
  std::vector<Eigen::Index> rows;
  double threshold = 0.5;
  Vector contribution;
};

// Sum of constraint rows for cell members predicted positive at `threshold`.
Vector CellContribution(const Cell& cell, const Vector& proba, const Matrix& c,
                        double threshold) {
  Vector sum = Vector::Zero(c.cols());
  for (Eigen::Index i : cell.rows) {
    if (proba(i) < threshold) break;
    sum += c.row(i).transpose();
  }
  return sum;
}

bool Prefer(double objective, double threshold, double best_objective,
            double best_threshold) {
  if (objective < best_objective - kTieTolerance) return true;
  if (objective > best_objective + kTieTolerance) return false;
  const double dist = std::abs(threshold - 0.5);
  const double best_dist = std::abs(best_threshold - 0.5);
  if (dist != best_dist) return dist < best_dist;
  return threshold < best_threshold;
}

}  // namespace

ModelParams TrainUnconstrained(const LabeledDataset& ds,
                               const TrainConfig& cfg) {
  return TrainWeighted(ds, Vector::Ones(ds.rows()), cfg);
}

std::string CellSignature(const Matrix& groups, Eigen::Index i) {
  std::string s(static_cast<std::size_t>(groups.cols()), '0');
  for (Eigen::Index k = 0; k < groups.cols(); ++k) {
    if (groups(i, k) != 0.0) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

CalibratedModel Calibrate(const ModelParams& m, const LabeledDataset& ds,
                          const ConstraintSet& cs) {
  if (cs.notion() != FairnessNotion::kDemographicParity &&
      cs.notion() != FairnessNotion::kEqualOpportunity) {
    throw InvalidArgument("calibration supports demographic_parity and "
                          "equal_opportunity only, not " +
                          std::string(ToString(cs.notion())));
  }
  const Vector proba = PredictProba(m, ds.features());
  // Scaled by 1/n so that sums of rows are violations directly.
  const Matrix c = ConstraintMatrix(cs, ds) / static_cast<double>(ds.rows());

  std::map<std::string, Cell> by_signature;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    auto& cell = by_signature[CellSignature(ds.groups(), i)];
    cell.rows.push_back(i);
  }
  std::vector<Cell> cells;
  for (auto& [signature, cell] : by_signature) {
    cell.signature = signature;
    std::stable_sort(cell.rows.begin(), cell.rows.end(),
                     [&proba](Eigen::Index a, Eigen::Index b) {
                       return proba(a) > proba(b);
                     });
    cell.contribution = CellContribution(cell, proba, c, cell.threshold);
    cells.push_back(std::move(cell));
  }

  Vector total = Vector::Zero(c.cols());
  for (const auto& cell : cells) total += cell.contribution;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (auto& cell : cells) {
      if (static_cast<Eigen::Index>(cell.rows.size()) < kMinCalibrationCell) {
        continue;
      }
      const Vector others = total - cell.contribution;
      double best_threshold = cell.threshold;
      double best_objective = MaxAbsViolation(total);

      // Walk candidates from high to low probability; the prefix sum holds
      // the contribution of every row with proba >= candidate.
      Vector prefix = Vector::Zero(c.cols());
      std::size_t next = 0;
      auto consider = [&](double threshold) {
        while (next < cell.rows.size() && proba(cell.rows[next]) >= threshold) {
          prefix += c.row(cell.rows[next]).transpose();
          ++next;
        }
        const double objective = MaxAbsViolation(others + prefix);
        if (Prefer(objective, threshold, best_objective, best_threshold)) {
          best_objective = objective;
          best_threshold = threshold;
        }
      };
      bool half_done = false;
      for (std::size_t j = 0; j < cell.rows.size(); ++j) {
        const double candidate = proba(cell.rows[j]);
        if (j > 0 && candidate == proba(cell.rows[j - 1])) continue;
        if (!half_done && candidate < 0.5) {
          consider(0.5);
          half_done = true;
        }
        consider(candidate);
      }
      if (!half_done) consider(0.5);

      if (best_threshold != cell.threshold) {
        cell.threshold = best_threshold;
        cell.contribution = CellContribution(cell, proba, c, cell.threshold);
        total = others + cell.contribution;
        changed = true;
      }
    }
    if (!changed) break;
  }

  CalibratedModel result{m, {}};
  for (const auto& cell : cells) result.thresholds[cell.signature] = cell.threshold;
  return result;
}

Vector PredictCalibrated(const CalibratedModel& cm, const Matrix& features,
                         const Matrix& groups) {
  if (features.rows() != groups.rows()) {
    throw InvalidArgument("features and groups disagree on row count");
  }
  const Vector proba = PredictProba(cm.base, features);
  Vector labels(proba.size());
  for (Eigen::Index i = 0; i < proba.size(); ++i) {
    const auto it = cm.thresholds.find(CellSignature(groups, i));
    const double threshold = it == cm.thresholds.end() ? 0.5 : it->second;
    labels(i) = proba(i) >= threshold ? 1.0 : 0.0;
  }
  return labels;
}

}  // namespace fairlabel
