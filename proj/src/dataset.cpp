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

#include "fairlabel/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <set>

#include "fairlabel/csv.hpp"

namespace fairlabel {
namespace {

bool IsBinary(double v) { return v == 0.0 || v == 1.0; }

std::size_t RequireColumn(const std::vector<std::string>& header,
                          const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InvalidArgument("missing column: " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> ParseNumericColumn(
    const std::vector<std::vector<std::string>>& rows, std::size_t col,
    const std::string& name) {
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto v = csv::ParseDouble(rows[r][col]);
    if (!v) {
      throw InvalidArgument("unparseable numeric cell '" + rows[r][col] +
                            "' in column " + name + " at data row " +
                            std::to_string(r + 1));
    }
    values.push_back(*v);
  }
  return values;
}

bool Contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

LabeledDataset::LabeledDataset(Matrix features, Vector labels, Matrix groups,
                               std::vector<std::string> feature_names,
                               std::vector<std::string> group_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      groups_(std::move(groups)),
      feature_names_(std::move(feature_names)),
      group_names_(std::move(group_names)) {
  const Eigen::Index n = features_.rows();
  if (n < 1) throw InvalidArgument("dataset must have at least one row");
  if (features_.cols() < 1) {
    throw InvalidArgument("dataset must have at least one feature");
  }
  if (groups_.cols() < 1) {
    throw InvalidArgument("dataset must have at least one group");
  }
  if (labels_.size() != n || groups_.rows() != n) {
    throw InvalidArgument("features, labels and groups disagree on row count");
  }
  if (static_cast<Eigen::Index>(feature_names_.size()) != features_.cols()) {
    throw InvalidArgument("feature_names length does not match features");
  }
  if (static_cast<Eigen::Index>(group_names_.size()) != groups_.cols()) {
    throw InvalidArgument("group_names length does not match groups");
  }
  if (!features_.allFinite()) throw InvalidArgument("features must be finite");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!IsBinary(labels_(i))) {
      throw InvalidArgument("labels must be 0 or 1 (row " + std::to_string(i) +
                            ")");
    }
    for (Eigen::Index k = 0; k < groups_.cols(); ++k) {
      if (!IsBinary(groups_(i, k))) {
        throw InvalidArgument("group membership must be 0 or 1");
      }
    }
  }
}

LabeledDataset LabeledDataset::Subset(
    const std::vector<Eigen::Index>& indices) const {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Matrix f(m, features_.cols());
  Vector y(m);
  Matrix g(m, groups_.cols());
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index src = indices[static_cast<std::size_t>(r)];
    if (src < 0 || src >= rows()) throw InvalidArgument("row index out of range");
    f.row(r) = features_.row(src);
    y(r) = labels_(src);
    g.row(r) = groups_.row(src);
  }
  return LabeledDataset(std::move(f), std::move(y), std::move(g),
                        feature_names_, group_names_);
}

void LabeledDataset::RequireProperGroups() const {
  for (Eigen::Index k = 0; k < groups_.cols(); ++k) {
    const double members = groups_.col(k).sum();
    if (members == 0.0) {
      throw InvalidArgument("group '" + group_names_[k] + "' has no members");
    }
    if (members == static_cast<double>(rows())) {
      throw InvalidArgument("group '" + group_names_[k] +
                            "' has no non-members");
    }
  }
}

void LabeledDataset::RequireBothClasses() const {
  const double positives = labels_.sum();
  if (positives == 0.0 || positives == static_cast<double>(rows())) {
    throw InvalidArgument("labels must contain both classes");
  }
}

bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
  return a.features() == b.features() && a.labels() == b.labels() &&
         a.groups() == b.groups() && a.feature_names() == b.feature_names() &&
         a.group_names() == b.group_names();
}

std::vector<std::uint8_t> DeriveMembership(
    const GroupRule& rule, const std::vector<std::string>& header,
    const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::uint8_t> member(rows.size(), 0);
  if (const auto* eq = std::get_if<CategoricalEquals>(&rule)) {
    const auto col = RequireColumn(header, eq->column);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      member[r] = rows[r][col] == eq->value ? 1 : 0;
    }
  } else if (const auto* th = std::get_if<NumericThreshold>(&rule)) {
    const auto col = RequireColumn(header, th->column);
    const auto values = ParseNumericColumn(rows, col, th->column);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double v = values[r];
      bool in = false;
      switch (th->direction) {
        case ThresholdDirection::kBelow: in = v < th->cutoff; break;
        case ThresholdDirection::kAtOrBelow: in = v <= th->cutoff; break;
        case ThresholdDirection::kAbove: in = v > th->cutoff; break;
        case ThresholdDirection::kAtOrAbove: in = v >= th->cutoff; break;
      }
      member[r] = in ? 1 : 0;
    }
  } else {
    const auto& qb = std::get<QuantileBin>(rule);
    if (qb.num_bins < 2) throw InvalidArgument("quantile bin needs num_bins >= 2");
    if (qb.bin_index < 0 || qb.bin_index >= qb.num_bins) {
      throw InvalidArgument("quantile bin_index out of range");
    }
    const auto col = RequireColumn(header, qb.column);
    const auto values = ParseNumericColumn(rows, col, qb.column);
    if (values.empty()) return member;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> cuts;
    for (int j = 1; j < qb.num_bins; ++j) {
      std::size_t rank = static_cast<std::size_t>(j) * n /
                         static_cast<std::size_t>(qb.num_bins);
      cuts.push_back(sorted[std::min(rank, n - 1)]);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto bin = std::upper_bound(cuts.begin(), cuts.end(), values[r]) -
                       cuts.begin();
      member[r] = bin == qb.bin_index ? 1 : 0;
    }
  }
  return member;
}

LabeledDataset LoadCsv(const std::filesystem::path& path,
                       const CsvLoadOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw InvalidArgument("missing file: " + path.string());
  }
  const csv::Table table = csv::ReadFile(path);
  const auto& header = table.header;
  const auto& rows = table.rows;
  if (rows.empty()) throw InvalidArgument("CSV has no data rows");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());

  const auto label_col = RequireColumn(header, options.label_column);
  Vector labels(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& cell = rows[static_cast<std::size_t>(r)][label_col];
    const auto v = csv::ParseDouble(cell);
    if (!v || !IsBinary(*v)) {
      throw InvalidArgument("non-binary label value '" + cell + "' at data row " +
                            std::to_string(r + 1));
    }
    labels(r) = *v;
  }
  const double positives = labels.sum();
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    throw InvalidArgument("labels must contain both classes");
  }

  for (const auto& c : options.drop_columns) RequireColumn(header, c);
  for (const auto& c : options.categorical_columns) RequireColumn(header, c);

  if (options.group_specs.empty()) {
    throw InvalidArgument("at least one group spec is required");
  }
  Matrix groups(n, static_cast<Eigen::Index>(options.group_specs.size()));
  std::vector<std::string> group_names;
  for (std::size_t k = 0; k < options.group_specs.size(); ++k) {
    const auto& spec = options.group_specs[k];
    const auto member = DeriveMembership(spec.rule, header, rows);
    for (Eigen::Index r = 0; r < n; ++r) {
      groups(r, static_cast<Eigen::Index>(k)) = member[static_cast<std::size_t>(r)];
    }
    const double count = groups.col(static_cast<Eigen::Index>(k)).sum();
    if (count == 0.0) {
      throw InvalidArgument("group '" + spec.name + "' has zero members");
    }
    if (count == static_cast<double>(n)) {
      throw InvalidArgument("group '" + spec.name + "' has zero non-members");
    }
    group_names.push_back(spec.name);
  }

  std::vector<Vector> columns;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (c == label_col || Contains(options.drop_columns, name)) continue;

    // A column is numeric when every non-empty cell parses; empty cells in a
    // numeric column are rejected by ParseNumericColumn.
    bool numeric = !Contains(options.categorical_columns, name);
    if (numeric) {
      numeric = std::all_of(rows.begin(), rows.end(), [c](const auto& row) {
        return row[c].empty() || csv::ParseDouble(row[c]).has_value();
      });
    }
    if (numeric) {
      const auto values = ParseNumericColumn(rows, c, name);
      Vector col = Eigen::Map<const Vector>(values.data(), n);
      const double mean = col.mean();
      col.array() -= mean;
      const double variance = col.squaredNorm() / static_cast<double>(n);
      if (!(variance > 0.0)) {
        std::cerr << "warning: dropping constant column " << name << "\n";
        continue;
      }
      col /= std::sqrt(variance);
      col.array() -= col.mean();
      columns.push_back(std::move(col));
      names.push_back(name);
    } else {
      std::set<std::string> categories;
      for (const auto& row : rows) categories.insert(row[c]);
      if (categories.size() < 2) {
        std::cerr << "warning: dropping constant column " << name << "\n";
        continue;
      }
      for (const auto& category : categories) {
        Vector col(n);
        for (Eigen::Index r = 0; r < n; ++r) {
          col(r) = rows[static_cast<std::size_t>(r)][c] == category ? 1.0 : 0.0;
        }
        columns.push_back(std::move(col));
        names.push_back(name + "=" + category);
      }
    }
  }
  if (columns.empty()) throw InvalidArgument("no usable feature columns");

  Matrix features(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    features.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  return LabeledDataset(std::move(features), std::move(labels),
                        std::move(groups), std::move(names),
                        std::move(group_names));
}

SplitIndices MakeSplitIndices(Eigen::Index rows, const SplitConfig& cfg) {
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must be strictly between 0 and 1");
  }
  const auto n_test = static_cast<Eigen::Index>(
      std::llround(cfg.test_fraction * static_cast<double>(rows)));
  if (n_test == 0 || n_test == rows) {
    throw InvalidArgument("test_fraction " + std::to_string(cfg.test_fraction) +
                          " yields an empty split for " + std::to_string(rows) +
                          " rows");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);

  SplitIndices split;
  split.test.assign(order.begin(), order.begin() + n_test);
  split.train.assign(order.begin() + n_test, order.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

std::pair<LabeledDataset, LabeledDataset> TrainTestSplit(
    const LabeledDataset& ds, const SplitConfig& cfg) {
  const SplitIndices split = MakeSplitIndices(ds.rows(), cfg);
  LabeledDataset train_ds = ds.Subset(split.train);
  for (Eigen::Index k = 0; k < train_ds.num_groups(); ++k) {
    const double members = train_ds.groups().col(k).sum();
    if (members == 0.0 || members == static_cast<double>(train_ds.rows())) {
      throw InvalidArgument("group '" + train_ds.group_names()[k] +
                            (members == 0.0 ? "' has no training members"
                                            : "' has no training non-members"));
    }
  }
  return {std::move(train_ds), ds.Subset(split.test)};
}

LabeledDataset MaskGroupFeatures(const LabeledDataset& ds,
                                 const std::vector<std::string>& masked_columns) {
  const auto& names = ds.feature_names();
  std::vector<bool> drop(names.size(), false);
  for (const auto& masked : masked_columns) {
    bool matched = false;
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (names[j] == masked || names[j].rfind(masked + "=", 0) == 0) {
        drop[j] = true;
        matched = true;
      }
    }
    if (!matched) throw InvalidArgument("unknown feature column: " + masked);
  }
  std::vector<Eigen::Index> keep;
  std::vector<std::string> kept_names;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (!drop[j]) {
      keep.push_back(static_cast<Eigen::Index>(j));
      kept_names.push_back(names[j]);
    }
  }
  if (keep.empty()) throw InvalidArgument("masking removes every feature");
  Matrix features(ds.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    features.col(static_cast<Eigen::Index>(j)) = ds.features().col(keep[j]);
  }
  return LabeledDataset(std::move(features), ds.labels(), ds.groups(),
                        std::move(kept_names), ds.group_names());
}

}  // namespace fairlabel
