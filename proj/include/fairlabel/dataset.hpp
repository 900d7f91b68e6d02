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

#ifndef FAIRLABEL_DATASET_HPP_
#define FAIRLABEL_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairlabel/common.hpp"

namespace fairlabel {

/// Features, binary labels and protected-group membership for n examples.
///
/// Immutable after construction. The constructor checks shapes and that
/// labels and memberships are 0/1; whether every group is non-degenerate is
/// checked separately by RequireProperGroups() because a test split may
/// legitimately contain an empty group.
class LabeledDataset {
 public:
  LabeledDataset(Matrix features, Vector labels, Matrix groups,
                 std::vector<std::string> feature_names,
                 std::vector<std::string> group_names);

  const Matrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  const Matrix& groups() const { return groups_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::vector<std::string>& group_names() const { return group_names_; }

  Eigen::Index rows() const { return features_.rows(); }
  Eigen::Index num_features() const { return features_.cols(); }
  Eigen::Index num_groups() const { return groups_.cols(); }

  /// Rows in `indices` (in the given order) as a new dataset.
  LabeledDataset Subset(const std::vector<Eigen::Index>& indices) const;

  /// Throws InvalidArgument unless every group has at least one member and
  /// one non-member.
  void RequireProperGroups() const;

  /// Throws InvalidArgument unless both label classes occur.
  void RequireBothClasses() const;

 private:
  Matrix features_;
  Vector labels_;
  Matrix groups_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> group_names_;
};

bool operator==(const LabeledDataset& a, const LabeledDataset& b);

enum class ThresholdDirection { kBelow, kAtOrBelow, kAbove, kAtOrAbove };

struct CategoricalEquals {
  std::string column;
  std::string value;
};

struct NumericThreshold {
  std::string column;
  double cutoff = 0.0;
  ThresholdDirection direction = ThresholdDirection::kBelow;
};

/// Bin `bin_index` of `num_bins` empirical quantile bins. Bins are
/// lower-inclusive and upper-exclusive except the last; equal values always
/// share a bin.
struct QuantileBin {
  std::string column;
  int num_bins = 2;
  int bin_index = 0;
};

using GroupRule = std::variant<CategoricalEquals, NumericThreshold, QuantileBin>;

struct GroupSpec {
  std::string name;
  GroupRule rule;
};

struct SplitConfig {
  double test_fraction = 0.3;
  std::uint64_t seed = 0;
};

struct CsvLoadOptions {
  std::string label_column;
  std::vector<GroupSpec> group_specs;
  std::vector<std::string> drop_columns;
  /// Columns forced to one-hot encoding even if every cell is numeric.
  std::vector<std::string> categorical_columns;
};

/// Reads a header-first, comma-delimited CSV. Numeric columns are
/// standardized to zero mean and unit (population) variance, non-numeric
/// columns are one-hot encoded with categories in lexicographic order, and
/// constant columns are dropped with a warning on stderr. Group membership is
/// derived from the raw cell values.
LabeledDataset LoadCsv(const std::filesystem::path& path,
                       const CsvLoadOptions& options);

/// Evaluates group specs over raw string columns. Exposed for tests.
std::vector<std::uint8_t> DeriveMembership(
    const GroupRule& rule, const std::vector<std::string>& header,
    const std::vector<std::vector<std::string>>& rows);

struct SplitIndices {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
};

/// Row indices of a deterministic partition of `rows` rows, each side in
/// ascending order. Throws when either side would be empty.
SplitIndices MakeSplitIndices(Eigen::Index rows, const SplitConfig& cfg);

/// Deterministic row partition. Both sides keep the original row order.
/// Throws if a group has no members (or no non-members) in the training side;
/// the test side may contain empty groups.
std::pair<LabeledDataset, LabeledDataset> TrainTestSplit(
    const LabeledDataset& ds, const SplitConfig& cfg);

/// Drops features named in `masked_columns`. A name matches either a feature
/// exactly or the source column of one-hot features ("sex" drops "sex=Male").
LabeledDataset MaskGroupFeatures(const LabeledDataset& ds,
                                 const std::vector<std::string>& masked_columns);

}  // namespace fairlabel

#endif  // FAIRLABEL_DATASET_HPP_
