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

#ifndef FAIRLABEL_TESTS_TEST_UTIL_HPP_
#define FAIRLABEL_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "fairlabel/dataset.hpp"

namespace fairlabel::testing {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fairlabel-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

inline std::string ReadText(const std::filesystem::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::vector<std::string> Names(const std::string& prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Dataset from explicit columns; features default to a single ramp column.
inline LabeledDataset MakeDataset(const std::vector<double>& labels,
                                  const std::vector<std::vector<double>>& groups,
                                  Matrix features = Matrix()) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  const auto k = static_cast<Eigen::Index>(groups.size());
  Vector y(n);
  Matrix g(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < k; ++j) {
      g(i, j) = groups[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
  }
  if (features.size() == 0) {
    features = Matrix(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) features(i, 0) = static_cast<double>(i);
  }
  const auto d = features.cols();
  return LabeledDataset(std::move(features), std::move(y), std::move(g),
                        Names("x", d), Names("g", k));
}

// Random dataset with logistic labels; every group keeps members and
// non-members and both classes occur (resampled until they do).
inline LabeledDataset RandomDataset(Eigen::Index n, Eigen::Index d, Eigen::Index k,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  for (;;) {
    Matrix x(n, d);
    Matrix g(n, k);
    Vector y(n);
    Vector beta(d);
    for (Eigen::Index j = 0; j < d; ++j) beta(j) = normal(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng);
      for (Eigen::Index j = 0; j < k; ++j) g(i, j) = unif(rng) < 0.4 ? 1.0 : 0.0;
      const double p = 1.0 / (1.0 + std::exp(-(x.row(i).dot(beta) + 0.5 * g(i, 0))));
      y(i) = unif(rng) < p ? 1.0 : 0.0;
    }
    bool ok = y.sum() > 0 && y.sum() < static_cast<double>(n);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double m = g.col(j).sum();
      // Positive and negative members so every notion's rates are defined.
      const double pos = g.col(j).dot(y);
      ok = ok && m > 0 && m < static_cast<double>(n) && pos > 0 && pos < m;
    }
    if (ok) return LabeledDataset(x, y, g, Names("x", d), Names("g", k));
  }
}

}  // namespace fairlabel::testing

#endif  // FAIRLABEL_TESTS_TEST_UTIL_HPP_
