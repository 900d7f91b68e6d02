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

#ifndef FAIRLABEL_CONSTRAINTS_HPP_
#define FAIRLABEL_CONSTRAINTS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "fairlabel/common.hpp"
#include "fairlabel/dataset.hpp"

namespace fairlabel {

enum class FairnessNotion {
  kDemographicParity,
  kDisparateImpact,
  kEqualOpportunity,
  kEqualizedOdds,
};

std::string_view ToString(FairnessNotion notion);
FairnessNotion ParseNotion(std::string_view name);

/// Equalized odds carries a true-positive and a false-positive constraint per
/// group; every other notion only has the first block.
enum class ConstraintBlock { kTruePositive, kFalsePositive };

/// Empirical group frequency z_k, positive rate p_x and joint rate p_g_k.
struct BaseRates {
  Vector z;
  double p_x = 0.0;
  Vector p_g;
};

/// Computes rates from observed labels. Throws InvalidArgument naming the
/// offending group when z_k or p_x is 0 or 1.
BaseRates ComputeBaseRates(const LabeledDataset& ds);

/// Same counts without the degeneracy checks, for evaluation splits where a
/// group may be empty.
BaseRates ComputeBaseRatesUnchecked(const LabeledDataset& ds);

/// A fairness notion together with frozen base rates.
///
/// Create() rejects rates whose denominators vanish for the notion.
/// ForEvaluation() instead marks such constraints undefined; they then
/// contribute zero to every violation.
class ConstraintSet {
 public:
  static ConstraintSet Create(FairnessNotion notion, BaseRates rates);
  static ConstraintSet ForEvaluation(FairnessNotion notion, BaseRates rates);

  FairnessNotion notion() const { return notion_; }
  const BaseRates& rates() const { return rates_; }
  Eigen::Index group_count() const { return rates_.z.size(); }
  /// K, or 2K for equalized odds (true-positive block first).
  Eigen::Index violation_size() const;
  bool defined(Eigen::Index k, ConstraintBlock block) const;

 private:
  ConstraintSet(FairnessNotion notion, BaseRates rates, bool strict);

  FairnessNotion notion_;
  BaseRates rates_;
  std::vector<bool> defined_tp_;
  std::vector<bool> defined_fp_;
};

/// c_k(x, candidate_y) with the observed label standing in for the true label.
/// Disparate impact evaluates as demographic parity. Every implemented
/// constraint has c_k(x, 0) = 0.
double ConstraintValue(const ConstraintSet& cs, Eigen::Index k, int in_group,
                       int observed_label, int candidate_y,
                       ConstraintBlock block = ConstraintBlock::kTruePositive);

/// Per-example c(x_i, 1) for every constraint, n x violation_size().
Matrix ConstraintMatrix(const ConstraintSet& cs, const LabeledDataset& ds);

/// Delta_k = (1/n) sum_i scores_i * c_k(x_i, 1). Scores are probabilities
/// during learning and hard 0/1 predictions when reporting.
Vector Violation(const ConstraintSet& cs, const LabeledDataset& ds,
                 const Vector& scores);

/// max_k |Delta_k|.
double MaxAbsViolation(const Vector& delta);

}  // namespace fairlabel

#endif  // FAIRLABEL_CONSTRAINTS_HPP_
