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

// Python bindings. Datasets cross the boundary as (features, labels, groups)
// arrays; reports as JSON text, which the package decodes.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "fairlabel/baselines.hpp"
#include "fairlabel/biasgen.hpp"
#include "fairlabel/experiment.hpp"
#include "fairlabel/prepare.hpp"
#include "fairlabel/reweigh.hpp"

namespace py = pybind11;

namespace fairlabel {
namespace {

LabeledDataset MakeDataset(const Matrix& features, const Vector& labels,
                           const Matrix& groups) {
  std::vector<std::string> fnames, gnames;
  for (Eigen::Index j = 0; j < features.cols(); ++j) fnames.push_back("x" + std::to_string(j));
  for (Eigen::Index k = 0; k < groups.cols(); ++k) gnames.push_back("group_" + std::to_string(k));
  return LabeledDataset(features, labels, groups, fnames, gnames);
}

Multipliers MakeMultipliers(const Vector& lambda, const std::optional<Vector>& fp) {
  return fp ? Multipliers::Paired(lambda, *fp) : Multipliers::Single(lambda);
}

TrainConfig MakeTrainConfig(Eigen::Index rows, std::optional<double> l2) {
  TrainConfig cfg = TrainConfig::UnitPenaltyFor(rows);
  if (l2) cfg.l2_strength = *l2;
  return cfg;
}

py::dict FitToDict(const FitResult& r) {
  py::dict out;
  out["coefficients"] = r.model.coefficients;
  out["intercept"] = r.model.intercept;
  out["multipliers"] = r.multipliers.primary();
  if (r.multipliers.paired()) out["false_positive_multipliers"] = r.multipliers.false_positive();
  out["trace"] = r.trace;
  return out;
}

}  // namespace
}  // namespace fairlabel

PYBIND11_MODULE(_core, m) {
  using namespace fairlabel;
  m.doc() = "Label-bias correction by learned example weights.";

  // Translators are tried newest first, so the base class goes first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument",
                                          py::make_tuple(base, py::handle(PyExc_ValueError)));
  py::register_exception<TrainingError>(m, "TrainingError", base);

  m.def(
      "example_weight",
      [](const Vector& lambda, const Vector& membership, int label,
         std::optional<Vector> fp) {
        const Multipliers mult = MakeMultipliers(lambda, fp);
        return mult.paired() ? ExampleWeightEqualizedOdds(mult, membership, label)
                             : ExampleWeight(mult, membership, label);
      },
      py::arg("multipliers"), py::arg("membership"), py::arg("label"),
      py::arg("false_positive_multipliers") = py::none(),
      "Weight of one example; pass false_positive_multipliers for equalized odds.");

  m.def("bias_score", &BiasScore, py::arg("true_score"), py::arg("c1"), py::arg("c0"),
        py::arg("multipliers"));
  m.def("debias_score", &DebiasScore, py::arg("bias_score"), py::arg("c1"), py::arg("c0"),
        py::arg("multipliers"));

  m.def(
      "violation",
      [](const std::string& notion, const Vector& labels, const Matrix& groups,
         const Vector& scores) {
        const LabeledDataset ds = MakeDataset(Matrix::Zero(labels.size(), 1), labels, groups);
        const auto cs =
            ConstraintSet::ForEvaluation(ParseNotion(notion), ComputeBaseRatesUnchecked(ds));
        return Violation(cs, ds, scores);
      },
      py::arg("notion"), py::arg("labels"), py::arg("groups"), py::arg("scores"));

  m.def(
      "train",
      [](const Matrix& x, const Vector& y, const std::optional<Vector>& weights,
         std::optional<double> l2) {
        // Groups do not enter training; one placeholder column satisfies the dataset.
        const LabeledDataset ds = MakeDataset(x, y, Matrix::Zero(y.size(), 1));
        const Vector w = weights ? *weights : Vector::Ones(y.size());
        const ModelParams fit = TrainWeighted(ds, w, MakeTrainConfig(y.size(), l2));
        return py::make_tuple(fit.coefficients, fit.intercept);
      },
      py::arg("features"), py::arg("labels"), py::arg("weights") = py::none(),
      py::arg("l2_strength") = py::none(), "Weighted logistic regression.");

  m.def(
      "predict_proba",
      [](const Vector& coefficients, double intercept, const Matrix& x) {
        return PredictProba(ModelParams{coefficients, intercept}, x);
      },
      py::arg("coefficients"), py::arg("intercept"), py::arg("features"));

  m.def(
      "fit",
      [](const Matrix& x, const Vector& y, const Matrix& groups, const std::string& notion,
         double eta, int loops, std::optional<double> l2, bool sampling, std::uint64_t seed) {
        const LabeledDataset ds = MakeDataset(x, y, groups);
        const auto cs = ConstraintSet::Create(ParseNotion(notion), ComputeBaseRates(ds));
        const ReweighConfig rcfg{eta, loops};
        const TrainConfig tcfg = MakeTrainConfig(y.size(), l2);
        std::optional<FitResult> r;
        {
          py::gil_scoped_release release;
          r = sampling ? FitSampling(ds, cs, rcfg, tcfg, seed) : Fit(ds, cs, rcfg, tcfg);
        }
        return FitToDict(*r);
      },
      py::arg("features"), py::arg("labels"), py::arg("groups"),
      py::arg("notion") = "demographic_parity", py::arg("eta") = 1.0, py::arg("loops") = 100,
      py::arg("l2_strength") = py::none(), py::arg("sampling") = false, py::arg("seed") = 0,
      "Learns multipliers and a classifier on reweighted examples.");

  m.def(
      "generate",
      [](Eigen::Index n, Eigen::Index d, const Vector& lambda_star, double group_fraction,
         std::uint64_t seed, std::uint64_t model_seed) {
        GeneratorConfig cfg;
        cfg.n = n;
        cfg.d = d;
        cfg.lambda_star = lambda_star;
        cfg.group_fraction = group_fraction;
        cfg.seed = seed;
        cfg.model_seed = model_seed;
        const SyntheticTask t = Generate(cfg);
        py::dict out;
        out["features"] = t.dataset.features();
        out["labels"] = t.dataset.labels();
        out["groups"] = t.dataset.groups();
        out["true_scores"] = t.true_scores;
        out["bias_scores"] = t.bias_scores;
        out["true_labels"] = t.true_labels;
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("lambda_star"), py::arg("group_fraction") = 0.3,
      py::arg("seed") = 0, py::arg("model_seed") = 0);

  m.def(
      "run_experiment_json",
      [](const std::filesystem::path& config, std::optional<std::uint64_t> seed, bool write) {
        ExperimentConfig cfg = LoadConfig(config);
        if (seed) cfg.seed = *seed;
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = RunExperiment(cfg);
        }
        if (write) WriteReport(report);
        return ReportToJson(report).dump();
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("write") = false);

  m.def(
      "validate_report_json",
      [](const std::string& text) { ValidateReport(nlohmann::json::parse(text)); },
      py::arg("report"));

  m.def(
      "prepare",
      [](const std::string& dataset, const std::filesystem::path& out_dir,
         std::optional<std::filesystem::path> raw_dir, bool allow_download) {
        const PrepareResult r = Prepare({dataset, out_dir, raw_dir, allow_download});
        return py::make_tuple(r.csv_path, r.config_path, r.rows);
      },
      py::arg("dataset"), py::arg("out_dir"), py::arg("raw_dir") = py::none(),
      py::arg("allow_download") = true);
}
