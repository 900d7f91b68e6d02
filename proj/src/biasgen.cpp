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

#include "fairlabel/biasgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "fairlabel/csv.hpp"

namespace fairlabel {
namespace {

constexpr int kMaxAttempts = 16;

void CheckScore(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
  }
}

double Exponent(const Vector& lambda, const Vector& c) {
  if (lambda.size() != c.size()) {
    throw InvalidArgument("constraint values and multipliers differ in length");
  }
  const double a = lambda.dot(c);
  if (!std::isfinite(a)) throw InvalidArgument("tilt exponent is not finite");
  return ClampExponent(a);
}

// p e^{-a1} / (p e^{-a1} + (1 - p) e^{-a0}), evaluated relative to a0.
double Tilt(double p, double a1, double a0) {
  if (p == 0.0 || p == 1.0) return p;
  const double num = p * std::exp(a0 - a1);
  return num / (num + (1.0 - p));
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

double BiasScore(double true_score, const Vector& c1, const Vector& c0,
                 const Vector& lambda) {
  CheckScore(true_score, "true_score");
  return Tilt(true_score, Exponent(lambda, c1), Exponent(lambda, c0));
}

double DebiasScore(double bias_score, const Vector& c1, const Vector& c0,
                   const Vector& lambda) {
  CheckScore(bias_score, "bias_score");
  return Tilt(bias_score, -Exponent(lambda, c1), -Exponent(lambda, c0));
}

Vector TiltValues(TiltForm form, const Vector& membership,
                  double group_fraction) {
  if (form == TiltForm::kIndicator) return membership;
  if (!(group_fraction > 0.0 && group_fraction < 1.0)) {
    throw InvalidArgument("group_fraction must lie in (0, 1)");
  }
  return membership.array() / group_fraction - 1.0;
}

SyntheticTask Generate(const GeneratorConfig& cfg) {
  if (cfg.n < 1 || cfg.d < 1) throw InvalidArgument("n and d must be positive");
  if (!(cfg.group_fraction > 0.0 && cfg.group_fraction < 1.0)) {
    throw InvalidArgument("group_fraction must lie in (0, 1)");
  }
  if (cfg.lambda_star.size() < 1 || !cfg.lambda_star.allFinite()) {
    throw InvalidArgument("lambda_star must be a nonempty finite vector");
  }
  if (!(cfg.signal_strength >= 0.0)) {
    throw InvalidArgument("signal_strength must be nonnegative");
  }
  const Eigen::Index n = cfg.n;
  const Eigen::Index d = cfg.d;
  const Eigen::Index k_count = cfg.lambda_star.size();

  std::mt19937_64 model_rng(cfg.model_seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector beta0(d);
  for (Eigen::Index j = 0; j < d; ++j) beta0(j) = normal(model_rng);
  beta0 *= cfg.signal_strength / beta0.norm();

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(attempt));
    std::normal_distribution<double> feature(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix x(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = feature(rng);
    }
    Matrix groups(n, k_count);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < k_count; ++k) {
        groups(i, k) = unit(rng) < cfg.group_fraction ? 1.0 : 0.0;
      }
    }
    bool degenerate = false;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const double members = groups.col(k).sum();
      degenerate |= members == 0.0 || members == static_cast<double>(n);
    }
    if (degenerate) continue;

    Vector true_scores(n), bias_scores(n), labels(n), true_labels(n);
    Matrix tilt(n, k_count);
    const Vector zeros = Vector::Zero(k_count);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double z = x.row(i).dot(beta0);
      true_scores(i) = 1.0 / (1.0 + std::exp(-z));
      const Vector c1 = TiltValues(cfg.tilt, groups.row(i).transpose(),
                                   cfg.group_fraction);
      tilt.row(i) = c1.transpose();
      bias_scores(i) = BiasScore(true_scores(i), c1, zeros, cfg.lambda_star);
      const double u = unit(rng);
      labels(i) = u < bias_scores(i) ? 1.0 : 0.0;
      true_labels(i) = u < true_scores(i) ? 1.0 : 0.0;
    }

    Matrix features(n, d + k_count);
    features << x, groups;
    std::vector<std::string> feature_names;
    for (Eigen::Index j = 0; j < d; ++j) {
      feature_names.push_back("x" + std::to_string(j));
    }
    std::vector<std::string> group_names;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      group_names.push_back("group_" + std::to_string(k));
      feature_names.push_back(group_names.back());
    }
    LabeledDataset ds(std::move(features), std::move(labels), std::move(groups),
                      std::move(feature_names), std::move(group_names));
    return SyntheticTask{std::move(ds),          std::move(true_scores),
                         std::move(bias_scores), std::move(true_labels),
                         std::move(tilt),        cfg};
  }
  throw InvalidArgument("could not draw non-degenerate groups after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

double DebiasCheck(const SyntheticTask& task, const Vector& lambda) {
  const Eigen::Index n = task.true_scores.size();
  const Vector zeros = Vector::Zero(task.tilt_values.cols());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector c1 = task.tilt_values.row(i).transpose();
    const double recovered = DebiasScore(task.bias_scores(i), c1, zeros, lambda);
    worst = std::max(worst, std::abs(recovered - task.true_scores(i)));
  }
  return worst;
}

void WriteTaskCsv(const SyntheticTask& task, const std::filesystem::path& path) {
  const auto& ds = task.dataset;
  const Eigen::Index d = task.config.d;
  csv::Table table;
  for (Eigen::Index j = 0; j < d; ++j) {
    table.header.push_back(ds.feature_names()[static_cast<std::size_t>(j)]);
  }
  for (const auto& g : ds.group_names()) table.header.push_back(g);
  table.header.insert(table.header.end(), {"label", "true_score", "true_label"});
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < d; ++j) {
      row.push_back(FormatDouble(ds.features()(i, j)));
    }
    for (Eigen::Index k = 0; k < ds.num_groups(); ++k) {
      row.push_back(ds.groups()(i, k) == 1.0 ? "1" : "0");
    }
    row.push_back(ds.labels()(i) == 1.0 ? "1" : "0");
    row.push_back(FormatDouble(task.true_scores(i)));
    row.push_back(task.true_labels(i) == 1.0 ? "1" : "0");
    table.rows.push_back(std::move(row));
  }
  csv::WriteFile(path, table);
}

}  // namespace fairlabel
