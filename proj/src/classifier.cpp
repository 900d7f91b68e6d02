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

#include "fairlabel/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fairlabel {
namespace {

constexpr double kScoreClamp = 35.0;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// theta = (coefficients..., intercept).
Vector Pack(const ModelParams& m) {
  Vector theta(m.coefficients.size() + 1);
  theta.head(m.coefficients.size()) = m.coefficients;
  theta(m.coefficients.size()) = m.intercept;
  return theta;
}

ModelParams Unpack(const Vector& theta) {
  const Eigen::Index d = theta.size() - 1;
  return ModelParams{theta.head(d), theta(d)};
}

class Objective {
 public:
  Objective(const LabeledDataset& ds, const Vector& weights, double l2)
      : x_(ds.features()), y_(ds.labels()), l2_(l2) {
    if (weights.size() != ds.rows()) {
      throw InvalidArgument("weights length does not match dataset rows");
    }
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      if (!std::isfinite(weights(i))) {
        throw InvalidArgument("non-finite weight at row " + std::to_string(i));
      }
      if (weights(i) < 0.0) {
        throw InvalidArgument("negative weight at row " + std::to_string(i));
      }
    }
    const double total = weights.sum();
    if (!(total > 0.0)) throw InvalidArgument("weights are all zero");
    w_ = weights / total;
  }

  Eigen::Index dim() const { return x_.cols() + 1; }

  Vector Scores(const Vector& theta) const {
    const Eigen::Index d = x_.cols();
    return (x_ * theta.head(d)).array() + theta(d);
  }

  double Value(const Vector& theta) const {
    const Vector z = Scores(theta);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (w_(i) == 0.0) continue;
      loss += w_(i) * (Softplus(z(i)) - y_(i) * z(i));
    }
    return loss + l2_ * theta.head(x_.cols()).squaredNorm();
  }

  Vector Gradient(const Vector& theta) const {
    const Eigen::Index d = x_.cols();
    const Vector z = Scores(theta);
    Vector r(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      r(i) = w_(i) * (Sigmoid(z(i)) - y_(i));
    }
    Vector g(d + 1);
    g.head(d) = x_.transpose() * r + 2.0 * l2_ * theta.head(d);
    g(d) = r.sum();
    return g;
  }

  Matrix Hessian(const Vector& theta) const {
    const Eigen::Index d = x_.cols();
    const Vector z = Scores(theta);
    Vector s(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = Sigmoid(z(i));
      s(i) = w_(i) * p * (1.0 - p);
    }
    const Matrix xs = x_.array().colwise() * s.array().sqrt();
    Matrix h(d + 1, d + 1);
    h.topLeftCorner(d, d).setZero();
    h.topLeftCorner(d, d).selfadjointView<Eigen::Lower>().rankUpdate(
        xs.transpose());
    h.topLeftCorner(d, d) =
        h.topLeftCorner(d, d).selfadjointView<Eigen::Lower>();
    h.topLeftCorner(d, d).diagonal().array() += 2.0 * l2_;
    const Vector cross = x_.transpose() * s;
    h.block(0, d, d, 1) = cross;
    h.block(d, 0, 1, d) = cross.transpose();
    h(d, d) = s.sum();
    return h;
  }

 private:
  const Matrix& x_;
  const Vector& y_;
  Vector w_;
  double l2_;
};

void CheckFinite(double value, int iteration) {
  if (!std::isfinite(value)) {
    throw TrainingError("training objective became non-finite at iteration " +
                            std::to_string(iteration),
                        iteration);
  }
}

// Backtracking along `direction` from theta. Returns the accepted step
// length, or 0 when no decrease was found.
double LineSearch(const Objective& obj, const Vector& theta, double value,
                  const Vector& gradient, const Vector& direction,
                  double initial_step, Vector& next, double& next_value) {
  const double slope = gradient.dot(direction);
  double t = initial_step;
  for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
    next = theta + t * direction;
    next_value = obj.Value(next);
    if (std::isfinite(next_value) &&
        next_value <= value + kArmijo * t * slope) {
      return t;
    }
  }
  return 0.0;
}

}  // namespace

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.intercept == b.intercept && a.coefficients == b.coefficients;
}

std::string_view ToString(Solver solver) {
  return solver == Solver::kNewton ? "newton" : "gradient_descent";
}

Solver ParseSolver(std::string_view name) {
  if (name == "newton") return Solver::kNewton;
  if (name == "gradient_descent") return Solver::kGradientDescent;
  throw InvalidArgument("unknown solver: " + std::string(name));
}

TrainConfig TrainConfig::UnitPenaltyFor(Eigen::Index rows) {
  if (rows < 1) throw InvalidArgument("rows must be positive");
  TrainConfig cfg;
  cfg.l2_strength = 0.5 / static_cast<double>(rows);
  return cfg;
}

void Validate(const TrainConfig& cfg) {
  if (!(cfg.l2_strength >= 0.0) || !std::isfinite(cfg.l2_strength)) {
    throw InvalidArgument("l2_strength must be a nonnegative real");
  }
  if (cfg.max_iterations < 1) {
    throw InvalidArgument("max_iterations must be positive");
  }
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) {
    throw InvalidArgument("step_size must be positive");
  }
  if (!(cfg.gradient_tolerance > 0.0)) {
    throw InvalidArgument("gradient_tolerance must be positive");
  }
}

TrainResult TrainWeightedDetailed(const LabeledDataset& ds,
                                  const Vector& weights,
                                  const TrainConfig& cfg) {
  Validate(cfg);
  const Objective obj(ds, weights, cfg.l2_strength);
  Vector theta = Vector::Zero(obj.dim());
  double value = obj.Value(theta);
  CheckFinite(value, 0);

  TrainResult result;
  result.objective_trace.push_back(value);
  double step = cfg.step_size;
  Vector next(obj.dim());
  double next_value = 0.0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Vector g = obj.Gradient(theta);
    result.gradient_norm = g.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(result.gradient_norm)) CheckFinite(result.gradient_norm, it);
    if (result.gradient_norm <= cfg.gradient_tolerance) {
      result.converged = true;
      break;
    }
    Vector direction;
    double initial = 1.0;
    if (cfg.solver == Solver::kNewton) {
      const Matrix h = obj.Hessian(theta);
      Eigen::LDLT<Matrix> ldlt(h);
      direction = -ldlt.solve(g);
      if (ldlt.info() != Eigen::Success || !direction.allFinite() ||
          direction.dot(g) >= 0.0) {
        direction = -g;
      }
    } else {
      direction = -g;
      initial = step;
    }
    const double accepted = LineSearch(obj, theta, value, g, direction,
                                       initial, next, next_value);
    if (accepted == 0.0) {
      // No representable decrease left along the descent direction.
      result.converged = result.gradient_norm <= cfg.gradient_tolerance;
      break;
    }
    if (cfg.solver == Solver::kGradientDescent) step = accepted;
    CheckFinite(next_value, it + 1);
    theta.swap(next);
    value = next_value;
    result.objective_trace.push_back(value);
  }
  result.iterations = it;
  if (!result.converged) {
    result.gradient_norm = obj.Gradient(theta).lpNorm<Eigen::Infinity>();
    result.converged = result.gradient_norm <= cfg.gradient_tolerance;
  }
  result.params = Unpack(theta);
  return result;
}

ModelParams TrainWeighted(const LabeledDataset& ds, const Vector& weights,
                          const TrainConfig& cfg) {
  return TrainWeightedDetailed(ds, weights, cfg).params;
}

double WeightedObjective(const ModelParams& m, const LabeledDataset& ds,
                         const Vector& weights, const TrainConfig& cfg) {
  if (m.coefficients.size() != ds.num_features()) {
    throw InvalidArgument("coefficient count does not match features");
  }
  return Objective(ds, weights, cfg.l2_strength).Value(Pack(m));
}

Vector WeightedGradient(const ModelParams& m, const LabeledDataset& ds,
                        const Vector& weights, const TrainConfig& cfg) {
  if (m.coefficients.size() != ds.num_features()) {
    throw InvalidArgument("coefficient count does not match features");
  }
  return Objective(ds, weights, cfg.l2_strength).Gradient(Pack(m));
}

Vector PredictProba(const ModelParams& m, const Matrix& features) {
  if (features.cols() != m.coefficients.size()) {
    throw InvalidArgument("feature dimension " + std::to_string(features.cols()) +
                          " does not match model dimension " +
                          std::to_string(m.coefficients.size()));
  }
  Vector z = (features * m.coefficients).array() + m.intercept;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = Sigmoid(std::clamp(z(i), -kScoreClamp, kScoreClamp));
  }
  return z;
}

Vector PredictLabel(const ModelParams& m, const Matrix& features) {
  const Vector p = PredictProba(m, features);
  return (p.array() >= 0.5).cast<double>();
}

double ErrorRate(const Vector& predictions, const Vector& labels) {
  if (predictions.size() != labels.size() || labels.size() == 0) {
    throw InvalidArgument("prediction and label lengths differ");
  }
  return (predictions.array() != labels.array()).cast<double>().mean();
}

}  // namespace fairlabel
