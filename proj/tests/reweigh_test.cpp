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

#include <cmath>
#include <random>

#include "fairlabel/baselines.hpp"
#include "fairlabel/biasgen.hpp"
#include "fairlabel/reweigh.hpp"
#include "test_util.hpp"

namespace fairlabel {
namespace {

using testing::MakeDataset;
using testing::RandomDataset;

constexpr double kTight = 1e-12;

Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST_CASE("example weights by substitution") {
  const double ln2 = std::log(2.0), ln3 = std::log(3.0);
  for (int label : {0, 1}) {
    CHECK(ExampleWeight(Multipliers::Single(V({0, 0})), V({1, 0}), label) == 0.5);
  }
  CHECK(ExampleWeight(Multipliers::Single(V({ln3})), V({1}), 1) ==
        doctest::Approx(0.75).epsilon(kTight));
  CHECK(ExampleWeight(Multipliers::Single(V({ln3})), V({1}), 0) ==
        doctest::Approx(0.25).epsilon(kTight));
  CHECK(ExampleWeight(Multipliers::Single(V({ln2, ln2})), V({1, 1}), 1) ==
        doctest::Approx(0.8).epsilon(kTight));
  // Non-members are untouched.
  CHECK(ExampleWeight(Multipliers::Single(V({ln3})), V({0}), 1) == 0.5);
}

TEST_CASE("equalized-odds weights by substitution") {
  const double ln3 = std::log(3.0);
  const auto zero = Multipliers::Paired(V({0}), V({0}));
  CHECK(ExampleWeightEqualizedOdds(zero, V({1}), 0) == 0.5);
  CHECK(ExampleWeightEqualizedOdds(zero, V({1}), 1) == 0.5);
  for (double fp : {-4.0, 0.0, 2.5}) {
    CHECK(ExampleWeightEqualizedOdds(Multipliers::Paired(V({ln3}), V({fp})), V({1}), 1) ==
          doctest::Approx(0.75).epsilon(kTight));
  }
  CHECK(ExampleWeightEqualizedOdds(Multipliers::Paired(V({7}), V({ln3})), V({1}), 0) ==
        doctest::Approx(0.25).epsilon(kTight));
  CHECK_THROWS_AS(ExampleWeightEqualizedOdds(Multipliers::Single(V({0})), V({1}), 0),
                  InvalidArgument);
}

TEST_CASE("weights for both labels sum to exactly one") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-60, 60);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto lam = Multipliers::Single(V({u(rng), u(rng), u(rng)}));
    const Vector g = V({static_cast<double>(rng() % 2), static_cast<double>(rng() % 2),
                        static_cast<double>(rng() % 2)});
    const double w1 = ExampleWeight(lam, g, 1), w0 = ExampleWeight(lam, g, 0);
    CHECK(w1 + w0 == 1.0);
    CHECK(w1 > 0.0);
    CHECK(w0 > 0.0);
    CHECK(w1 <= 1.0);
    CHECK(w0 <= 1.0);
    CHECK(std::isfinite(w1));
  }
}

TEST_CASE("weights stay strictly inside (0, 1) away from the clamp") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = u(rng);
    CHECK(WeightFromExponent(a, 1) > 0.0);
    CHECK(WeightFromExponent(a, 1) < 1.0);
    CHECK(WeightFromExponent(a, 0) > 0.0);
    CHECK(WeightFromExponent(a, 0) < 1.0);
  }
  // The exponent clamp keeps extreme multipliers finite.
  CHECK(WeightFromExponent(1e6, 0) == WeightFromExponent(50, 0));
  CHECK(WeightFromExponent(-1e6, 1) > 0.0);
}

TEST_CASE("raising a multiplier favours positive members") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3), step(0.01, 1);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector base = V({u(rng), u(rng)});
    Vector up = base;
    const Eigen::Index k = static_cast<Eigen::Index>(rng() % 2);
    up(k) += step(rng);
    Vector g = V({static_cast<double>(rng() % 2), static_cast<double>(rng() % 2)});
    g(k) = 1;
    const auto a = Multipliers::Single(base), b = Multipliers::Single(up);
    CHECK(ExampleWeight(b, g, 1) > ExampleWeight(a, g, 1));
    CHECK(ExampleWeight(b, g, 0) < ExampleWeight(a, g, 0));
  }
}

TEST_CASE("multiplier updates") {
  CHECK(UpdateMultipliers(Multipliers::Single(V({0.5})), V({0.2}), 1.0).primary()(0) ==
        doctest::Approx(0.3).epsilon(kTight));
  const auto same = UpdateMultipliers(Multipliers::Single(V({0.5, -1})), V({0, 0}), 1.0);
  CHECK(same.primary() == V({0.5, -1}));
  const auto upd = UpdateMultipliers(Multipliers::Single(V({0, 1})), V({-0.4, 0.2}), 0.5);
  CHECK(upd.primary()(0) == doctest::Approx(0.2).epsilon(kTight));
  CHECK(upd.primary()(1) == doctest::Approx(0.9).epsilon(kTight));
  // Paired: TP block then FP block, each against its own slice.
  const auto p = UpdateMultipliers(Multipliers::Paired(V({1}), V({2})), V({0.5, -0.5}), 2);
  CHECK(p.primary()(0) == 0.0);
  CHECK(p.false_positive()(0) == 3.0);
  CHECK_THROWS_AS(UpdateMultipliers(Multipliers::Single(V({0})), V({1, 2}), 1),
                  InvalidArgument);
  CHECK_THROWS_AS(Multipliers::Single(V({std::nan("")})), InvalidArgument);
}

TEST_CASE("computed weights follow the dataset rows") {
  const auto ds = MakeDataset({1, 0, 1, 0}, {{1, 1, 0, 0}});
  const Vector w = ComputeWeights(Multipliers::Single(V({std::log(3.0)})), ds);
  CHECK(w(0) == doctest::Approx(0.75).epsilon(kTight));
  CHECK(w(1) == doctest::Approx(0.25).epsilon(kTight));
  CHECK(w(2) == 0.5);
  CHECK(w(3) == 0.5);
}

TEST_CASE("debias identity against the generator's tilt") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1), lam(-3, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector lambda = V({lam(rng), lam(rng), lam(rng)});
    const Vector g = V({static_cast<double>(rng() % 2), static_cast<double>(rng() % 2),
                        static_cast<double>(rng() % 2)});
    const double truth = u(rng);
    const Vector c1 = TiltValues(TiltForm::kIndicator, g, 0.3);
    const double bias = BiasScore(truth, c1, Vector::Zero(3), lambda);
    const auto m = Multipliers::Single(lambda);
    const double num = ExampleWeight(m, g, 1) * bias;
    const double recovered = num / (num + ExampleWeight(m, g, 0) * (1 - bias));
    CHECK(std::abs(recovered - truth) < kTight);
  }
}

TEST_CASE("zero loops return the unconstrained model") {
  const auto ds = RandomDataset(80, 3, 2, 4);
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kDemographicParity, ComputeBaseRates(ds));
  const TrainConfig tcfg = TrainConfig::UnitPenaltyFor(80);
  const FitResult r = Fit(ds, cs, {1.0, 0}, tcfg);
  CHECK(r.model == TrainUnconstrained(ds, tcfg));
  CHECK(r.multipliers.primary() == Vector::Zero(2));
  CHECK(r.trace.size() == 1);
}

TEST_CASE("trace length and notion-specific multipliers") {
  const auto ds = RandomDataset(120, 3, 2, 6);
  const TrainConfig tcfg = TrainConfig::UnitPenaltyFor(120);
  const auto odds =
      ConstraintSet::Create(FairnessNotion::kEqualizedOdds, ComputeBaseRates(ds));
  const FitResult r = Fit(ds, odds, {1.0, 7}, tcfg);
  CHECK(r.trace.size() == 8);
  CHECK(r.trace[0].size() == 4);
  CHECK(r.multipliers.paired());
  // Multipliers are the eta-weighted sum of the first seven trace entries.
  Vector acc = Vector::Zero(4);
  for (int t = 0; t < 7; ++t) acc -= r.trace[static_cast<std::size_t>(t)];
  CHECK((r.multipliers.Flat() - acc).cwiseAbs().maxCoeff() < kTight);
}

TEST_CASE("a balanced start is a fixed point") {
  // Members are exact copies of non-members, so every model scores both
  // halves identically and the demographic-parity violation is zero.
  const auto half = RandomDataset(40, 2, 1, 8);
  Matrix x(80, 2);
  x << half.features(), half.features();
  Vector y(80);
  y << half.labels(), half.labels();
  Matrix g(80, 1);
  g << Vector::Ones(40), Vector::Zero(40);
  const LabeledDataset ds(x, y, g, {"a", "b"}, {"g"});
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kDemographicParity, ComputeBaseRates(ds));
  const FitResult r = Fit(ds, cs, {1.0, 20}, TrainConfig::UnitPenaltyFor(80));
  CHECK(r.multipliers.primary().cwiseAbs().maxCoeff() < 20 * 1e-12);
  const Vector w = ComputeWeights(r.multipliers, ds);
  CHECK((w.array() - 0.5).abs().maxCoeff() < 1e-11);
}

TEST_CASE("fit shrinks the soft violation") {
  for (auto notion : {FairnessNotion::kDemographicParity, FairnessNotion::kEqualOpportunity,
                      FairnessNotion::kEqualizedOdds}) {
    // Group columns are visible to the model, as on the benchmarks.
    const auto raw = RandomDataset(400, 3, 2, 31);
    Matrix x(400, 5);
    x << raw.features(), raw.groups();
    const LabeledDataset ds(x, raw.labels(), raw.groups(), testing::Names("x", 5),
                            raw.group_names());
    const auto cs = ConstraintSet::Create(notion, ComputeBaseRates(ds));
    const FitResult r = Fit(ds, cs, {1.0, 30}, TrainConfig::UnitPenaltyFor(400));
    CHECK(MaxAbsViolation(r.trace.back()) <= MaxAbsViolation(r.trace.front()));
  }
}

TEST_CASE("fit removes injected bias on synthetic data") {
  GeneratorConfig gen;
  gen.n = 10000;
  gen.lambda_star = V({1.0});
  gen.seed = 42;
  const SyntheticTask task = Generate(gen);
  const auto& ds = task.dataset;
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kDemographicParity, ComputeBaseRates(ds));
  const TrainConfig tcfg = TrainConfig::UnitPenaltyFor(ds.rows());
  const FitResult r = Fit(ds, cs, ReweighConfig{}, tcfg);
  const double fitted =
      MaxAbsViolation(Violation(cs, ds, PredictLabel(r.model, ds.features())));
  const double plain = MaxAbsViolation(
      Violation(cs, ds, PredictLabel(TrainUnconstrained(ds, tcfg), ds.features())));
  CHECK(fitted <= 0.02);
  CHECK(fitted < plain);
}

TEST_CASE("fit is deterministic") {
  const auto ds = RandomDataset(150, 3, 2, 9);
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kEqualOpportunity, ComputeBaseRates(ds));
  const TrainConfig tcfg = TrainConfig::UnitPenaltyFor(150);
  const FitResult a = Fit(ds, cs, {1.0, 10}, tcfg);
  const FitResult b = Fit(ds, cs, {1.0, 10}, tcfg);
  CHECK(a.model == b.model);
  CHECK(a.multipliers.Flat() == b.multipliers.Flat());
  const FitResult c = FitSampling(ds, cs, {1.0, 5}, tcfg, 3);
  const FitResult d = FitSampling(ds, cs, {1.0, 5}, tcfg, 3);
  CHECK(c.model == d.model);
}

TEST_CASE("training failures carry the loop iteration") {
  // A single example that sampling may reject leaves all-zero weights.
  const auto ds = MakeDataset({1, 0}, {{1, 0}});
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kDemographicParity, ComputeBaseRates(ds));
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 64 && !seen; ++seed) {
    try {
      FitSampling(ds, cs, {1.0, 3}, TrainConfig{}, seed);
    } catch (const TrainingError& e) {
      seen = true;
      CHECK(e.iteration() >= 1);
      CHECK(std::string(e.what()).find("iteration " + std::to_string(e.iteration())) !=
            std::string::npos);
    }
  }
  CHECK(seen);
}

TEST_CASE("sampling keeps half the data at zero multipliers") {
  const auto ds = RandomDataset(100000, 1, 1, 10);
  const Vector mask = SamplingMask(Multipliers::Single(V({0})), ds, 77);
  CHECK(std::abs(mask.mean() - 0.5) < 0.005);
  CHECK(SamplingMask(Multipliers::Single(V({0})), ds, 77) == mask);
}

TEST_CASE("sampling acceptance equals the example weight") {
  // Acceptance probability for (member, y) is P(y' = y) = w(member, y).
  const auto lam = Multipliers::Single(V({std::log(3.0)}));
  CHECK(ExampleWeight(lam, V({1}), 1) == doctest::Approx(0.75).epsilon(kTight));
  const auto ds = MakeDataset(std::vector<double>(20000, 1.0),
                              {std::vector<double>(20000, 1.0)});
  const Vector mask = SamplingMask(lam, ds, 5);
  const double se = std::sqrt(0.75 * 0.25 / 20000);
  CHECK(std::abs(mask.mean() - 0.75) < 3 * se);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(Validate(ReweighConfig{0.0, 10}), InvalidArgument);
  CHECK_THROWS_AS(Validate(ReweighConfig{1.0, -1}), InvalidArgument);
  CHECK_NOTHROW(Validate(ReweighConfig{}));
  CHECK(ReweighConfig{}.eta == 1.0);
  CHECK(ReweighConfig{}.loops == 100);
}

}  // namespace
}  // namespace fairlabel
