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

#include "fairlabel/constraints.hpp"
#include "test_util.hpp"

namespace fairlabel {
namespace {

using testing::MakeDataset;
using testing::RandomDataset;

constexpr double kTight = 1e-12;

// Direct transcription of the per-row definitions, used as an oracle.
double OracleValue(FairnessNotion notion, ConstraintBlock block, double z,
                   double px, double pg, double g, double y) {
  if (block == ConstraintBlock::kFalsePositive) {
    return g * (1 - y) / (z - pg) - (1 - y) / (1 - px);
  }
  switch (notion) {
    case FairnessNotion::kDemographicParity:
    case FairnessNotion::kDisparateImpact:
      return g / z - 1;
    case FairnessNotion::kEqualOpportunity:
    case FairnessNotion::kEqualizedOdds:
      return g * y / pg - y / px;
  }
  return 0;
}

TEST_CASE("base rates by counting") {
  const auto ds = MakeDataset({1, 0, 1, 0}, {{1, 1, 0, 0}});
  const BaseRates r = ComputeBaseRates(ds);
  CHECK(r.z(0) == 0.5);
  CHECK(r.p_x == 0.5);
  CHECK(r.p_g(0) == 0.25);
}

TEST_CASE("degenerate base rates are rejected") {
  CHECK_THROWS_AS(ComputeBaseRates(MakeDataset({1, 1, 1, 1}, {{1, 1, 0, 0}})),
                  InvalidArgument);
  CHECK_THROWS_WITH_AS(ComputeBaseRates(MakeDataset({1, 0, 1, 0}, {{1, 1, 0, 0},
                                                                   {1, 1, 1, 1}})),
                       doctest::Contains("g1"), InvalidArgument);
  // The evaluation variant tolerates them.
  const BaseRates r =
      ComputeBaseRatesUnchecked(MakeDataset({1, 1, 1, 1}, {{0, 0, 0, 0}}));
  CHECK(r.p_x == 1.0);
  CHECK(r.z(0) == 0.0);
}

TEST_CASE("group equal to label gives p_g = p_x = z") {
  std::mt19937_64 rng(4);
  std::vector<double> y(20);
  for (auto& v : y) v = static_cast<double>(rng() % 2);
  y[0] = 1;
  y[1] = 0;
  const BaseRates r = ComputeBaseRates(MakeDataset(y, {y}));
  CHECK(r.p_g(0) == doctest::Approx(r.p_x).epsilon(kTight));
  CHECK(r.z(0) == doctest::Approx(r.p_x).epsilon(kTight));
}

TEST_CASE("constraint values by substitution") {
  BaseRates r{Vector::Constant(1, 0.5), 0.5, Vector::Constant(1, 0.25)};
  const auto dp = ConstraintSet::Create(FairnessNotion::kDemographicParity, r);
  CHECK(ConstraintValue(dp, 0, 1, 0, 1) == 1.0);
  CHECK(ConstraintValue(dp, 0, 0, 0, 1) == -1.0);
  const auto di = ConstraintSet::Create(FairnessNotion::kDisparateImpact, r);
  CHECK(ConstraintValue(di, 0, 1, 1, 1) == ConstraintValue(dp, 0, 1, 1, 1));
  const auto eo = ConstraintSet::Create(FairnessNotion::kEqualOpportunity, r);
  CHECK(ConstraintValue(eo, 0, 1, 1, 1) == 2.0);
  CHECK(ConstraintValue(eo, 0, 0, 1, 1) == -2.0);
  CHECK(ConstraintValue(eo, 0, 1, 0, 1) == 0.0);
  const auto odds = ConstraintSet::Create(FairnessNotion::kEqualizedOdds, r);
  // g(1-y)/(z-p_g) - (1-y)/(1-p_x) = 1/0.25 - 1/0.5.
  CHECK(ConstraintValue(odds, 0, 1, 0, 1, ConstraintBlock::kFalsePositive) == 2.0);
  CHECK(ConstraintValue(odds, 0, 1, 1, 1, ConstraintBlock::kFalsePositive) == 0.0);
  CHECK_THROWS_AS(ConstraintValue(dp, 0, 1, 0, 1, ConstraintBlock::kFalsePositive),
                  InvalidArgument);
  CHECK_THROWS_AS(ConstraintValue(dp, 1, 1, 0, 1), InvalidArgument);
}

TEST_CASE("candidate label 0 always yields 0") {
  BaseRates r{Vector::Constant(1, 0.3), 0.4, Vector::Constant(1, 0.1)};
  for (auto notion : {FairnessNotion::kDemographicParity, FairnessNotion::kDisparateImpact,
                      FairnessNotion::kEqualOpportunity, FairnessNotion::kEqualizedOdds}) {
    const auto cs = ConstraintSet::Create(notion, r);
    for (int g = 0; g < 2; ++g) {
      for (int y = 0; y < 2; ++y) CHECK(ConstraintValue(cs, 0, g, y, 0) == 0.0);
    }
  }
}

TEST_CASE("strict constraint sets reject vanishing denominators") {
  // z == p_g: every member is positive, so the FP block is undefined.
  BaseRates r{Vector::Constant(1, 0.25), 0.5, Vector::Constant(1, 0.25)};
  CHECK_THROWS_AS(ConstraintSet::Create(FairnessNotion::kEqualizedOdds, r),
                  InvalidArgument);
  CHECK_NOTHROW(ConstraintSet::Create(FairnessNotion::kEqualOpportunity, r));
  BaseRates none{Vector::Constant(1, 0.25), 0.5, Vector::Constant(1, 0.0)};
  CHECK_THROWS_AS(ConstraintSet::Create(FairnessNotion::kEqualOpportunity, none),
                  InvalidArgument);
  const auto eval = ConstraintSet::ForEvaluation(FairnessNotion::kEqualizedOdds, r);
  CHECK_FALSE(eval.defined(0, ConstraintBlock::kFalsePositive));
  CHECK(eval.defined(0, ConstraintBlock::kTruePositive));
  CHECK(ConstraintValue(eval, 0, 1, 0, 1, ConstraintBlock::kFalsePositive) == 0.0);
}

TEST_CASE("hand-enumerated violation") {
  const auto ds = MakeDataset({1, 0, 1, 0}, {{1, 1, 0, 0}});
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kDemographicParity, ComputeBaseRates(ds));
  const Vector scores = (Vector(4) << 1, 1, 0, 0).finished();
  const Vector delta = Violation(cs, ds, scores);
  REQUIRE(delta.size() == 1);
  CHECK(delta(0) == 0.5);
  CHECK(MaxAbsViolation(delta) == 0.5);
  CHECK_THROWS_AS(Violation(cs, ds, Vector::Zero(3)), InvalidArgument);
}

TEST_CASE("violation matches the per-row oracle for every notion") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = RandomDataset(40, 2, 3, seed);
    const BaseRates r = ComputeBaseRates(ds);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u;
    Vector scores(ds.rows());
    for (auto& s : scores) s = u(rng);
    for (auto notion : {FairnessNotion::kDemographicParity, FairnessNotion::kDisparateImpact,
                        FairnessNotion::kEqualOpportunity, FairnessNotion::kEqualizedOdds}) {
      const auto cs = ConstraintSet::Create(notion, r);
      const Vector delta = Violation(cs, ds, scores);
      const bool paired = notion == FairnessNotion::kEqualizedOdds;
      REQUIRE(delta.size() == (paired ? 6 : 3));
      for (Eigen::Index k = 0; k < delta.size(); ++k) {
        const auto block = k < 3 ? ConstraintBlock::kTruePositive
                                 : ConstraintBlock::kFalsePositive;
        const Eigen::Index g = k % 3;
        double sum = 0;
        for (Eigen::Index i = 0; i < ds.rows(); ++i) {
          sum += scores(i) * OracleValue(notion, block, r.z(g), r.p_x, r.p_g(g),
                                         ds.groups()(i, g), ds.labels()(i));
        }
        CHECK(delta(k) == doctest::Approx(sum / 40).epsilon(1e-12));
      }
      const Matrix c = ConstraintMatrix(cs, ds);
      CHECK(c.rows() == 40);
      CHECK(c.cols() == delta.size());
      CHECK(((c.transpose() * scores) / 40 - delta).cwiseAbs().maxCoeff() < kTight);
    }
  }
}

TEST_CASE("demographic parity is blind to constant score shifts") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto ds = RandomDataset(50, 2, 2, 21);
  const auto cs =
      ConstraintSet::Create(FairnessNotion::kDemographicParity, ComputeBaseRates(ds));
  for (int trial = 0; trial < 100; ++trial) {
    Vector s(ds.rows());
    for (auto& v : s) v = 0.5 + 0.4 * u(rng);
    const double shift = 0.1 * u(rng);
    const Vector a = Violation(cs, ds, s);
    const Vector b = Violation(cs, ds, (s.array() + shift).matrix());
    CHECK((a - b).cwiseAbs().maxCoeff() < kTight);
  }
  CHECK(MaxAbsViolation(Violation(cs, ds, Vector::Constant(ds.rows(), 0.37))) < kTight);
}

TEST_CASE("scores equal to labels satisfy opportunity and odds") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = RandomDataset(20, 2, 2, 100 + seed);
    const BaseRates r = ComputeBaseRates(ds);
    const auto eo = ConstraintSet::Create(FairnessNotion::kEqualOpportunity, r);
    const auto odds = ConstraintSet::Create(FairnessNotion::kEqualizedOdds, r);
    CHECK(MaxAbsViolation(Violation(eo, ds, ds.labels())) < kTight);
    const Vector v = Violation(odds, ds, ds.labels());
    CHECK(v.size() == 4);
    CHECK(MaxAbsViolation(v) < kTight);
  }
}

TEST_CASE("notion names round trip") {
  for (auto notion : {FairnessNotion::kDemographicParity, FairnessNotion::kDisparateImpact,
                      FairnessNotion::kEqualOpportunity, FairnessNotion::kEqualizedOdds}) {
    CHECK(ParseNotion(ToString(notion)) == notion);
  }
  CHECK_THROWS_AS(ParseNotion("parity"), InvalidArgument);
}

}  // namespace
}  // namespace fairlabel
