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

#include "fairlabel/constraints.hpp"

#include <cmath>

namespace fairlabel {
namespace {

bool UsesLabels(FairnessNotion notion) {
  return notion == FairnessNotion::kEqualOpportunity ||
         notion == FairnessNotion::kEqualizedOdds;
}

std::string GroupLabel(const LabeledDataset& ds, Eigen::Index k) {
  return "'" + ds.group_names()[static_cast<std::size_t>(k)] + "'";
}

}  // namespace

std::string_view ToString(FairnessNotion notion) {
  switch (notion) {
    case FairnessNotion::kDemographicParity: return "demographic_parity";
    case FairnessNotion::kDisparateImpact: return "disparate_impact";
    case FairnessNotion::kEqualOpportunity: return "equal_opportunity";
    case FairnessNotion::kEqualizedOdds: return "equalized_odds";
  }
  return "unknown";
}

FairnessNotion ParseNotion(std::string_view name) {
  for (auto notion :
       {FairnessNotion::kDemographicParity, FairnessNotion::kDisparateImpact,
        FairnessNotion::kEqualOpportunity, FairnessNotion::kEqualizedOdds}) {
    if (ToString(notion) == name) return notion;
  }
  throw InvalidArgument("unknown fairness notion: " + std::string(name));
}

BaseRates ComputeBaseRatesUnchecked(const LabeledDataset& ds) {
  const double n = static_cast<double>(ds.rows());
  BaseRates rates;
  rates.z = ds.groups().colwise().sum().transpose() / n;
  rates.p_x = ds.labels().sum() / n;
  rates.p_g = (ds.groups().transpose() * ds.labels()) / n;
  return rates;
}

BaseRates ComputeBaseRates(const LabeledDataset& ds) {
  BaseRates rates = ComputeBaseRatesUnchecked(ds);
  if (rates.p_x == 0.0 || rates.p_x == 1.0) {
    throw InvalidArgument("degenerate positive rate p_x = " +
                          std::to_string(rates.p_x) +
                          ": labels must contain both classes");
  }
  for (Eigen::Index k = 0; k < rates.z.size(); ++k) {
    if (rates.z(k) == 0.0 || rates.z(k) == 1.0) {
      throw InvalidArgument("degenerate group frequency for group " +
                            GroupLabel(ds, k) + ": z = " +
                            std::to_string(rates.z(k)));
    }
  }
  return rates;
}

ConstraintSet::ConstraintSet(FairnessNotion notion, BaseRates rates,
                             bool strict)
    : notion_(notion), rates_(std::move(rates)) {
  const Eigen::Index k_count = rates_.z.size();
  if (k_count < 1 || rates_.p_g.size() != k_count) {
    throw InvalidArgument("base rates must have one entry per group");
  }
  defined_tp_.assign(static_cast<std::size_t>(k_count), true);
  defined_fp_.assign(static_cast<std::size_t>(k_count), notion_ ==
                                                            FairnessNotion::kEqualizedOdds);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double z = rates_.z(k);
    const double pg = rates_.p_g(k);
    std::string problem;
    bool tp_ok = true;
    bool fp_ok = true;
    if (UsesLabels(notion_)) {
      tp_ok = pg > 0.0 && rates_.p_x > 0.0;
      if (!tp_ok) problem = "p_g = 0 (no positive members)";
      if (notion_ == FairnessNotion::kEqualizedOdds) {
        fp_ok = z - pg > 0.0 && rates_.p_x < 1.0;
        if (!fp_ok && problem.empty()) {
          problem = "z = p_g (no negative members)";
        }
      }
    } else {
      tp_ok = z > 0.0;
      if (!tp_ok) problem = "z = 0 (no members)";
    }
    if (strict && !problem.empty()) {
      throw InvalidArgument("constraint " + std::to_string(k) + " for " +
                            std::string(ToString(notion_)) +
                            " is undefined: " + problem);
    }
    defined_tp_[static_cast<std::size_t>(k)] = tp_ok;
    if (notion_ == FairnessNotion::kEqualizedOdds) {
      defined_fp_[static_cast<std::size_t>(k)] = fp_ok;
    }
  }
}

ConstraintSet ConstraintSet::Create(FairnessNotion notion, BaseRates rates) {
  return ConstraintSet(notion, std::move(rates), /*strict=*/true);
}

ConstraintSet ConstraintSet::ForEvaluation(FairnessNotion notion,
                                           BaseRates rates) {
  return ConstraintSet(notion, std::move(rates), /*strict=*/false);
}

Eigen::Index ConstraintSet::violation_size() const {
  return notion_ == FairnessNotion::kEqualizedOdds ? 2 * group_count()
                                                   : group_count();
}

bool ConstraintSet::defined(Eigen::Index k, ConstraintBlock block) const {
  if (k < 0 || k >= group_count()) throw InvalidArgument("group index out of range");
  const auto idx = static_cast<std::size_t>(k);
  return block == ConstraintBlock::kTruePositive ? defined_tp_[idx]
                                                 : defined_fp_[idx];
}

double ConstraintValue(const ConstraintSet& cs, Eigen::Index k, int in_group,
                       int observed_label, int candidate_y,
                       ConstraintBlock block) {
  if (k < 0 || k >= cs.group_count()) {
    throw InvalidArgument("group index out of range");
  }
  if ((in_group != 0 && in_group != 1) ||
      (observed_label != 0 && observed_label != 1) ||
      (candidate_y != 0 && candidate_y != 1)) {
    throw InvalidArgument("constraint arguments must be 0 or 1");
  }
  if (block == ConstraintBlock::kFalsePositive &&
      cs.notion() != FairnessNotion::kEqualizedOdds) {
    throw InvalidArgument("false-positive constraints exist only for equalized odds");
  }
  if (candidate_y == 0 || !cs.defined(k, block)) return 0.0;

  const BaseRates& r = cs.rates();
  const double g = in_group;
  const double y = observed_label;
  switch (cs.notion()) {
    case FairnessNotion::kDemographicParity:
    case FairnessNotion::kDisparateImpact:
      return g / r.z(k) - 1.0;
    case FairnessNotion::kEqualOpportunity:
    case FairnessNotion::kEqualizedOdds:
      if (block == ConstraintBlock::kTruePositive) {
        return g * y / r.p_g(k) - y / r.p_x;
      }
      return g * (1.0 - y) / (r.z(k) - r.p_g(k)) - (1.0 - y) / (1.0 - r.p_x);
  }
  return 0.0;
}

Matrix ConstraintMatrix(const ConstraintSet& cs, const LabeledDataset& ds) {
  if (ds.num_groups() != cs.group_count()) {
    throw InvalidArgument("dataset group count does not match constraint set");
  }
  const Eigen::Index n = ds.rows();
  const Eigen::Index k_count = cs.group_count();
  Matrix c(n, cs.violation_size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = static_cast<int>(ds.labels()(i));
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const int g = static_cast<int>(ds.groups()(i, k));
      c(i, k) = ConstraintValue(cs, k, g, y, 1, ConstraintBlock::kTruePositive);
      if (cs.notion() == FairnessNotion::kEqualizedOdds) {
        c(i, k_count + k) =
            ConstraintValue(cs, k, g, y, 1, ConstraintBlock::kFalsePositive);
      }
    }
  }
  return c;
}

Vector Violation(const ConstraintSet& cs, const LabeledDataset& ds,
                 const Vector& scores) {
  if (scores.size() != ds.rows()) {
    throw InvalidArgument("scores length does not match dataset rows");
  }
  const Matrix c = ConstraintMatrix(cs, ds);
  return c.transpose() * scores / static_cast<double>(ds.rows());
}

double MaxAbsViolation(const Vector& delta) {
  return delta.size() == 0 ? 0.0 : delta.cwiseAbs().maxCoeff();
}

}  // namespace fairlabel
