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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fairlabel/biasgen.hpp"
#include "test_util.hpp"

namespace fairlabel {
namespace {

constexpr double kTight = 1e-12;

Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST_CASE("bias score by substitution") {
  const Vector one = V({1}), zero = V({0});
  CHECK(BiasScore(0.3, one, zero, V({0})) == 0.3);
  CHECK(BiasScore(0.5, one, zero, V({std::log(3.0)})) ==
        doctest::Approx(0.25).epsilon(kTight));
  for (double lam : {-40.0, -1.0, 0.5, 60.0}) {
    CHECK(BiasScore(1.0, one, zero, V({lam})) == 1.0);
    CHECK(BiasScore(0.0, one, zero, V({lam})) == 0.0);
  }
  CHECK_THROWS_AS(BiasScore(1.5, one, zero, V({0})), InvalidArgument);
  CHECK_THROWS_AS(BiasScore(0.5, V({1, 1}), V({0, 0}), V({0})), InvalidArgument);
}

TEST_CASE("tilt values") {
  CHECK(TiltValues(TiltForm::kIndicator, V({1, 0}), 0.25) == V({1, 0}));
  CHECK(TiltValues(TiltForm::kDemographicParity, V({1, 0}), 0.25) == V({3, -1}));
}

TEST_CASE("bias and debias are inverse for random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1), lam(-3, 3);
  for (TiltForm form : {TiltForm::kIndicator, TiltForm::kDemographicParity}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector g = V({static_cast<double>(rng() % 2), static_cast<double>(rng() % 2)});
      const Vector lambda = V({lam(rng), lam(rng)});
      const Vector c1 = TiltValues(form, g, 0.4);
      const double p = u(rng);
      const double back =
          DebiasScore(BiasScore(p, c1, Vector::Zero(2), lambda), c1, Vector::Zero(2), lambda);
      CHECK(std::abs(back - p) < kTight);
    }
  }
}

TEST_CASE("unbiased generation matches the true scores on average") {
  GeneratorConfig cfg;
  cfg.n = 50000;
  cfg.lambda_star = V({0});
  cfg.seed = 3;
  const SyntheticTask task = Generate(cfg);
  const double mean_label = task.dataset.labels().mean();
  const double mean_score = task.true_scores.mean();
  const double se = std::sqrt(mean_score * (1 - mean_score) / cfg.n);
  CHECK(std::abs(mean_label - mean_score) < 3 * se);
  CHECK(task.dataset.labels() == task.true_labels);
  CHECK(DebiasCheck(task, V({0})) == 0.0);
}

TEST_CASE("positive multiplier suppresses member positives") {
  GeneratorConfig cfg;
  cfg.n = 50000;
  cfg.seed = 8;
  cfg.lambda_star = V({0});
  const SyntheticTask fair = Generate(cfg);
  cfg.lambda_star = V({2});
  const SyntheticTask biased = Generate(cfg);
  // Same seed: identical features, memberships and uniforms.
  REQUIRE(fair.dataset.groups() == biased.dataset.groups());
  const Vector& g = biased.dataset.groups().col(0);
  const double members = g.sum();
  CHECK(g.dot(biased.dataset.labels()) / members < g.dot(fair.dataset.labels()) / members);
  // Non-members are unaffected.
  const Vector rest = (1.0 - g.array()).matrix();
  CHECK(rest.dot(biased.dataset.labels()) == rest.dot(fair.dataset.labels()));
  for (TiltForm form : {TiltForm::kIndicator, TiltForm::kDemographicParity}) {
    cfg.tilt = form;
    const SyntheticTask t = Generate(cfg);
    CHECK(g.dot(t.dataset.labels()) < g.dot(fair.dataset.labels()));
  }
}

TEST_CASE("label frequencies match bias scores") {
  GeneratorConfig cfg;
  cfg.n = 100000;
  cfg.lambda_star = V({1.5});
  cfg.seed = 21;
  const SyntheticTask task = Generate(cfg);
  // Ten bins of bias score; within each, the label frequency must match the
  // mean bias score up to three standard errors.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cfg.n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return task.bias_scores(a) < task.bias_scores(b);
  });
  const std::size_t bin = order.size() / 10;
  for (std::size_t b = 0; b < 10; ++b) {
    double labels = 0, var = 0, mean = 0;
    for (std::size_t j = b * bin; j < (b + 1) * bin; ++j) {
      const double p = task.bias_scores(order[j]);
      labels += task.dataset.labels()(order[j]);
      mean += p;
      var += p * (1 - p);
    }
    CHECK(std::abs(labels - mean) < 3 * std::sqrt(var) + 1);
  }
}

TEST_CASE("debias check") {
  GeneratorConfig cfg;
  cfg.n = 2000;
  cfg.lambda_star = V({1.2, -0.7});
  cfg.seed = 4;
  const SyntheticTask task = Generate(cfg);
  CHECK(DebiasCheck(task, cfg.lambda_star) < kTight);
  const double err = DebiasCheck(task, V({0, 0}));
  CHECK(err > 0);
  CHECK(err == (task.bias_scores - task.true_scores).cwiseAbs().maxCoeff());
  cfg.tilt = TiltForm::kDemographicParity;
  CHECK(DebiasCheck(Generate(cfg), cfg.lambda_star) < kTight);
}

TEST_CASE("generation is seed-deterministic") {
  GeneratorConfig cfg;
  cfg.n = 500;
  cfg.lambda_star = V({1.0});
  cfg.seed = 9;
  const SyntheticTask a = Generate(cfg);
  const SyntheticTask b = Generate(cfg);
  CHECK(a.dataset == b.dataset);
  CHECK(a.true_scores == b.true_scores);
  CHECK(a.true_labels == b.true_labels);
  cfg.seed = 10;
  CHECK_FALSE(Generate(cfg).dataset == a.dataset);
}

TEST_CASE("feature layout and shapes") {
  GeneratorConfig cfg;
  cfg.n = 300;
  cfg.d = 3;
  cfg.lambda_star = V({1, 1});
  const SyntheticTask t = Generate(cfg);
  CHECK(t.dataset.num_features() == 5);
  CHECK(t.dataset.feature_names()[3] == "group_0");
  CHECK(t.dataset.features().rightCols(2) == t.dataset.groups());
  CHECK(t.true_scores.size() == 300);
  CHECK((t.true_scores.array() >= 0).all());
  CHECK((t.true_scores.array() <= 1).all());
  CHECK(t.dataset.group_names() == std::vector<std::string>{"group_0", "group_1"});
}

TEST_CASE("degenerate groups are redrawn or rejected") {
  GeneratorConfig cfg;
  cfg.n = 20;
  cfg.group_fraction = 0.05;
  cfg.seed = 0;
  // P(no members) is about 0.36 per draw; 16 attempts almost surely succeed.
  const SyntheticTask t = Generate(cfg);
  CHECK(t.dataset.groups().sum() > 0);
  cfg.n = 1;
  CHECK_THROWS_AS(Generate(cfg), InvalidArgument);
  cfg.n = 10;
  cfg.group_fraction = 1.0;
  CHECK_THROWS_AS(Generate(cfg), InvalidArgument);
}

TEST_CASE("tasks export to the standard CSV schema") {
  GeneratorConfig cfg;
  cfg.n = 50;
  cfg.d = 2;
  cfg.lambda_star = V({1.0});
  cfg.seed = 2;
  const SyntheticTask t = Generate(cfg);
  testing::TempDir dir;
  WriteTaskCsv(t, dir / "task.csv");
  CsvLoadOptions opt;
  opt.label_column = "label";
  opt.drop_columns = {"true_score", "true_label"};
  opt.group_specs = {{"group_0", CategoricalEquals{"group_0", "1"}}};
  const LabeledDataset back = LoadCsv(dir / "task.csv", opt);
  CHECK(back.labels() == t.dataset.labels());
  CHECK(back.groups() == t.dataset.groups());
  CHECK(back.feature_names() ==
        std::vector<std::string>{"x0", "x1", "group_0"});
}

}  // namespace
}  // namespace fairlabel
