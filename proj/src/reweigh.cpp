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

#include "fairlabel/reweigh.hpp"

#include <cmath>
#include <random>
#include <string>

namespace fairlabel {
namespace {

void RequireFinite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + " must be finite");
}

void RequireLabel(int label) {
  if (label != 0 && label != 1) throw InvalidArgument("label must be 0 or 1");
}

double MembershipSum(const Vector& lambda, const Vector& membership) {
  if (lambda.size() != membership.size()) {
    throw InvalidArgument("membership length does not match multipliers");
  }
  return lambda.dot(membership);
}

template <typename TrainStep>
FitResult RunLoop(const LabeledDataset& ds, const ConstraintSet& cs,
                  const ReweighConfig& rcfg, const TrainConfig& tcfg,
                  TrainStep&& retrain) {
  Validate(rcfg);
  if (ds.num_groups() != cs.group_count()) {
    throw InvalidArgument("dataset group count does not match constraint set");
  }
  Multipliers lambda = Multipliers::Zeros(cs.notion(), cs.group_count());
  // Constraint values are fixed for the whole loop; only scores change.
  const Matrix c = ConstraintMatrix(cs, ds);
  const double n = static_cast<double>(ds.rows());

  auto train_at = [&](int iteration, const Vector& weights) {
    try {
      return TrainWeighted(ds, weights, tcfg);
    } catch (const Error& e) {
      throw TrainingError("reweighing loop iteration " +
                              std::to_string(iteration) + ": " + e.what(),
                          iteration);
    }
  };

  ModelParams model = train_at(0, Vector::Ones(ds.rows()));
  std::vector<Vector> trace;
  trace.reserve(static_cast<std::size_t>(rcfg.loops) + 1);
  for (int t = 1; t <= rcfg.loops; ++t) {
    const Vector delta =
        c.transpose() * PredictProba(model, ds.features()) / n;
    trace.push_back(delta);
    lambda = UpdateMultipliers(lambda, delta, rcfg.eta);
    model = train_at(t, retrain(t, lambda));
  }
  trace.push_back(c.transpose() * PredictProba(model, ds.features()) / n);
  return FitResult{std::move(model), std::move(lambda), std::move(trace)};
}

}  // namespace

Multipliers::Multipliers(Vector primary, Vector false_positive, bool paired)
    : primary_(std::move(primary)),
      false_positive_(std::move(false_positive)),
      paired_(paired) {
  RequireFinite(primary_, "multipliers");
  RequireFinite(false_positive_, "multipliers");
  if (paired_ && primary_.size() != false_positive_.size()) {
    throw InvalidArgument("true-positive and false-positive blocks differ in size");
  }
}

Multipliers Multipliers::Single(Vector lambda) {
  return Multipliers(std::move(lambda), Vector(), false);
}

Multipliers Multipliers::Paired(Vector true_positive, Vector false_positive) {
  return Multipliers(std::move(true_positive), std::move(false_positive), true);
}

Multipliers Multipliers::Zeros(FairnessNotion notion, Eigen::Index groups) {
  if (notion == FairnessNotion::kEqualizedOdds) {
    return Paired(Vector::Zero(groups), Vector::Zero(groups));
  }
  return Single(Vector::Zero(groups));
}

Vector Multipliers::Flat() const {
  if (!paired_) return primary_;
  Vector flat(2 * primary_.size());
  flat << primary_, false_positive_;
  return flat;
}

void Validate(const ReweighConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) {
    throw InvalidArgument("eta must be a positive real");
  }
  if (cfg.loops < 0) throw InvalidArgument("loops must be nonnegative");
}

double WeightFromExponent(double a, int label) {
  RequireLabel(label);
  if (std::isnan(a)) throw InvalidArgument("weight exponent is NaN");
  a = ClampExponent(a);
  const double e = std::exp(-std::abs(a));
  const double small = e / (1.0 + e);
  // a >= 0: label 0 carries the small weight; a < 0: label 1 does.
  const bool label_is_small = (a >= 0.0) == (label == 0);
  return label_is_small ? small : 1.0 - small;
}

double ExampleWeight(const Multipliers& lambda, const Vector& membership,
                     int label) {
  return WeightFromExponent(MembershipSum(lambda.primary(), membership), label);
}

double ExampleWeightEqualizedOdds(const Multipliers& lambda,
                                  const Vector& membership, int label) {
  RequireLabel(label);
  if (!lambda.paired()) {
    throw InvalidArgument("equalized-odds weights need paired multipliers");
  }
  if (label == 1) {
    return WeightFromExponent(MembershipSum(lambda.primary(), membership), 1);
  }
  // w^F / (1 + w^F) with w^F = exp(-sum lambda^FP g).
  return WeightFromExponent(
      -MembershipSum(lambda.false_positive(), membership), 1);
}

Vector ComputeWeights(const Multipliers& lambda, const LabeledDataset& ds) {
  if (lambda.group_count() != ds.num_groups()) {
    throw InvalidArgument("multiplier count does not match dataset groups");
  }
  Vector w(ds.rows());
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    const Vector g = ds.groups().row(i).transpose();
    const int y = static_cast<int>(ds.labels()(i));
    w(i) = lambda.paired() ? ExampleWeightEqualizedOdds(lambda, g, y)
                           : ExampleWeight(lambda, g, y);
  }
  return w;
}

Multipliers UpdateMultipliers(const Multipliers& lambda, const Vector& delta,
                              double eta) {
  const Eigen::Index k = lambda.group_count();
  if (delta.size() != (lambda.paired() ? 2 * k : k)) {
    throw InvalidArgument("violation vector length does not match multipliers");
  }
  if (!lambda.paired()) return Multipliers::Single(lambda.primary() - eta * delta);
  return Multipliers::Paired(lambda.primary() - eta * delta.head(k),
                             lambda.false_positive() - eta * delta.tail(k));
}

FitResult Fit(const LabeledDataset& ds, const ConstraintSet& cs,
              const ReweighConfig& rcfg, const TrainConfig& tcfg) {
  return RunLoop(ds, cs, rcfg, tcfg, [&ds](int, const Multipliers& lambda) {
    return ComputeWeights(lambda, ds);
  });
}

Vector SamplingMask(const Multipliers& lambda, const LabeledDataset& ds,
                    std::uint64_t seed) {
  if (lambda.group_count() != ds.num_groups()) {
    throw InvalidArgument("multiplier count does not match dataset groups");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector mask(ds.rows());
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    const Vector g = ds.groups().row(i).transpose();
    const int y = static_cast<int>(ds.labels()(i));
    const double u = unit(rng);
    if (lambda.paired()) {
      mask(i) = u < ExampleWeightEqualizedOdds(lambda, g, y) ? 1.0 : 0.0;
    } else {
      const int drawn = u < ExampleWeight(lambda, g, 1) ? 1 : 0;
      mask(i) = drawn == y ? 1.0 : 0.0;
    }
  }
  return mask;
}

FitResult FitSampling(const LabeledDataset& ds, const ConstraintSet& cs,
                      const ReweighConfig& rcfg, const TrainConfig& tcfg,
                      std::uint64_t seed) {
  return RunLoop(ds, cs, rcfg, tcfg,
                 [&ds, seed](int t, const Multipliers& lambda) {
                   return SamplingMask(lambda, ds,
                                       seed + static_cast<std::uint64_t>(t));
                 });
}

}  // namespace fairlabel
