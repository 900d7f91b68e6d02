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

#include "fairlabel/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "fairlabel/baselines.hpp"
#include "fairlabel/csv.hpp"

namespace fairlabel {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config reading helpers. Every accessor carries the JSON path of the value
// so errors can point at the offending field.

std::string Join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void RequireObject(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path.empty() ? "$" : path, "must be an object");
}

void CheckKeys(const json& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(Join(path, item.key()), "unknown field");
    }
  }
}

const json* Find(const json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const json& Require(const json& obj, const std::string& path,
                    std::string_view key) {
  const json* v = Find(obj, key);
  if (!v) throw ConfigError(Join(path, key), "required field is missing");
  return *v;
}

std::string AsString(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "must be a string");
  return v.get<std::string>();
}

double AsNumber(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

std::int64_t AsInteger(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t AsUnsigned(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(path, "must be a nonnegative integer");
}

bool AsBool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "must be a boolean");
  return v.get<bool>();
}

std::vector<std::string> AsStringList(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "must be an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(AsString(v[i], Index(path, i)));
  }
  return out;
}

Vector AsVector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    throw ConfigError(path, "must be a nonempty array of numbers");
  }
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = AsNumber(v[i], Index(path, i));
  }
  return out;
}

ThresholdDirection ParseDirection(const std::string& s, const std::string& path) {
  if (s == "below") return ThresholdDirection::kBelow;
  if (s == "at_or_below") return ThresholdDirection::kAtOrBelow;
  if (s == "above") return ThresholdDirection::kAbove;
  if (s == "at_or_above") return ThresholdDirection::kAtOrAbove;
  throw ConfigError(path, "must be one of below, at_or_below, above, at_or_above");
}

std::string_view ToString(ThresholdDirection d) {
  switch (d) {
    case ThresholdDirection::kBelow: return "below";
    case ThresholdDirection::kAtOrBelow: return "at_or_below";
    case ThresholdDirection::kAbove: return "above";
    case ThresholdDirection::kAtOrAbove: return "at_or_above";
  }
  return "below";
}

TiltForm ParseTilt(const std::string& s, const std::string& path) {
  if (s == "indicator") return TiltForm::kIndicator;
  if (s == "demographic_parity") return TiltForm::kDemographicParity;
  throw ConfigError(path, "must be indicator or demographic_parity");
}

std::string_view ToString(TiltForm t) {
  return t == TiltForm::kIndicator ? "indicator" : "demographic_parity";
}

GroupSpec ParseGroupSpec(const json& v, const std::string& path) {
  RequireObject(v, path);
  GroupSpec spec;
  spec.name = AsString(Require(v, path, "name"), Join(path, "name"));
  if (spec.name.empty()) throw ConfigError(Join(path, "name"), "must not be empty");
  const std::string rule = AsString(Require(v, path, "rule"), Join(path, "rule"));
  const std::string column =
      AsString(Require(v, path, "column"), Join(path, "column"));
  if (rule == "categorical_equals") {
    CheckKeys(v, path, {"name", "rule", "column", "value"});
    spec.rule = CategoricalEquals{
        column, AsString(Require(v, path, "value"), Join(path, "value"))};
  } else if (rule == "numeric_threshold") {
    CheckKeys(v, path, {"name", "rule", "column", "cutoff", "direction"});
    spec.rule = NumericThreshold{
        column, AsNumber(Require(v, path, "cutoff"), Join(path, "cutoff")),
        ParseDirection(
            AsString(Require(v, path, "direction"), Join(path, "direction")),
            Join(path, "direction"))};
  } else if (rule == "quantile_bin") {
    CheckKeys(v, path, {"name", "rule", "column", "num_bins", "bin_index"});
    const auto bins =
        AsInteger(Require(v, path, "num_bins"), Join(path, "num_bins"));
    const auto index =
        AsInteger(Require(v, path, "bin_index"), Join(path, "bin_index"));
    if (bins < 2) throw ConfigError(Join(path, "num_bins"), "must be >= 2");
    if (index < 0 || index >= bins) {
      throw ConfigError(Join(path, "bin_index"), "must lie in [0, num_bins)");
    }
    spec.rule = QuantileBin{column, static_cast<int>(bins), static_cast<int>(index)};
  } else {
    throw ConfigError(Join(path, "rule"),
                      "must be categorical_equals, numeric_threshold or "
                      "quantile_bin");
  }
  return spec;
}

json GroupSpecToJson(const GroupSpec& spec) {
  json j{{"name", spec.name}};
  if (const auto* eq = std::get_if<CategoricalEquals>(&spec.rule)) {
    j["rule"] = "categorical_equals";
    j["column"] = eq->column;
    j["value"] = eq->value;
  } else if (const auto* th = std::get_if<NumericThreshold>(&spec.rule)) {
    j["rule"] = "numeric_threshold";
    j["column"] = th->column;
    j["cutoff"] = th->cutoff;
    j["direction"] = ToString(th->direction);
  } else {
    const auto& qb = std::get<QuantileBin>(spec.rule);
    j["rule"] = "quantile_bin";
    j["column"] = qb.column;
    j["num_bins"] = qb.num_bins;
    j["bin_index"] = qb.bin_index;
  }
  return j;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

json VectorToJson(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

// ---------------------------------------------------------------------------
// Report validation helpers.

[[noreturn]] void Invalid(const std::string& path, const std::string& msg) {
  throw Error("report validation failed at " + path + ": " + msg);
}

const json& Member(const json& obj, const std::string& path,
                   std::string_view key) {
  if (!obj.is_object()) Invalid(path, "must be an object");
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) Invalid(Join(path, key), "missing");
  return *it;
}

double NumberIn(const json& v, const std::string& path, double lo, double hi) {
  if (!v.is_number()) Invalid(path, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < lo || x > hi) {
    Invalid(path, "must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return x;
}

void NumberArray(const json& v, const std::string& path) {
  if (!v.is_array()) Invalid(path, "must be an array");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
      Invalid(Index(path, i), "must be a finite number");
    }
  }
}

void StringArray(const json& v, const std::string& path) {
  if (!v.is_array()) Invalid(path, "must be an array");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) Invalid(Index(path, i), "must be a string");
  }
}

}  // namespace

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kUnconstrained: return "unconstrained";
    case Method::kCalibration: return "calibration";
    case Method::kReweigh: return "reweigh";
    case Method::kReweighSampling: return "reweigh-sampling";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (auto m : {Method::kUnconstrained, Method::kCalibration, Method::kReweigh,
                 Method::kReweighSampling}) {
    if (ToString(m) == name) return m;
  }
  throw InvalidArgument("unknown method: " + std::string(name));
}

ExperimentConfig ParseConfig(const json& doc,
                             const std::filesystem::path& base_dir) {
  RequireObject(doc, "");
  CheckKeys(doc, "", {"name", "dataset", "masked_columns", "notion", "methods",
                      "split", "seed", "reweigh", "train", "output_path",
                      "include_trace"});
  ExperimentConfig cfg;
  if (const json* v = Find(doc, "name")) cfg.name = AsString(*v, "name");
  if (const json* v = Find(doc, "seed")) cfg.seed = AsUnsigned(*v, "seed");

  const json& ds = Require(doc, "", "dataset");
  RequireObject(ds, "dataset");
  if (const json* syn = Find(ds, "synthetic")) {
    CheckKeys(ds, "dataset", {"synthetic"});
    const std::string p = "dataset.synthetic";
    RequireObject(*syn, p);
    CheckKeys(*syn, p, {"n", "d", "group_fraction", "lambda_star", "tilt",
                        "signal_strength", "model_seed"});
    GeneratorConfig gen;
    gen.n = AsInteger(Require(*syn, p, "n"), Join(p, "n"));
    if (gen.n < 2) throw ConfigError(Join(p, "n"), "must be >= 2");
    gen.d = AsInteger(Require(*syn, p, "d"), Join(p, "d"));
    if (gen.d < 1) throw ConfigError(Join(p, "d"), "must be >= 1");
    gen.group_fraction =
        AsNumber(Require(*syn, p, "group_fraction"), Join(p, "group_fraction"));
    if (!(gen.group_fraction > 0.0 && gen.group_fraction < 1.0)) {
      throw ConfigError(Join(p, "group_fraction"), "must lie in (0, 1)");
    }
    gen.lambda_star =
        AsVector(Require(*syn, p, "lambda_star"), Join(p, "lambda_star"));
    if (const json* v = Find(*syn, "tilt")) {
      gen.tilt = ParseTilt(AsString(*v, Join(p, "tilt")), Join(p, "tilt"));
    }
    if (const json* v = Find(*syn, "signal_strength")) {
      gen.signal_strength = AsNumber(*v, Join(p, "signal_strength"));
      if (gen.signal_strength < 0.0) {
        throw ConfigError(Join(p, "signal_strength"), "must be >= 0");
      }
    }
    if (const json* v = Find(*syn, "model_seed")) {
      gen.model_seed = AsUnsigned(*v, Join(p, "model_seed"));
    }
    cfg.dataset = SyntheticSource{gen};
  } else {
    CheckKeys(ds, "dataset", {"path", "label_column", "drop_columns",
                              "categorical_columns", "group_specs"});
    CsvSource src;
    src.path = Resolve(base_dir,
                       AsString(Require(ds, "dataset", "path"), "dataset.path"));
    src.options.label_column = AsString(Require(ds, "dataset", "label_column"),
                                        "dataset.label_column");
    if (const json* v = Find(ds, "drop_columns")) {
      src.options.drop_columns = AsStringList(*v, "dataset.drop_columns");
    }
    if (const json* v = Find(ds, "categorical_columns")) {
      src.options.categorical_columns =
          AsStringList(*v, "dataset.categorical_columns");
    }
    const json& specs = Require(ds, "dataset", "group_specs");
    if (!specs.is_array() || specs.empty()) {
      throw ConfigError("dataset.group_specs", "must be a nonempty array");
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto path = Index("dataset.group_specs", i);
      auto spec = ParseGroupSpec(specs[i], path);
      if (!names.insert(spec.name).second) {
        throw ConfigError(Join(path, "name"), "duplicate group name");
      }
      src.options.group_specs.push_back(std::move(spec));
    }
    cfg.dataset = std::move(src);
  }

  try {
    cfg.notion = ParseNotion(AsString(Require(doc, "", "notion"), "notion"));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("notion", e.what());
  }

  if (const json* v = Find(doc, "masked_columns")) {
    cfg.masked_columns = AsStringList(*v, "masked_columns");
  }
  if (cfg.notion == FairnessNotion::kDisparateImpact && cfg.masked_columns.empty()) {
    throw ConfigError("masked_columns", "required (nonempty) for disparate_impact");
  }

  const json& methods = Require(doc, "", "methods");
  if (!methods.is_array() || methods.empty()) {
    throw ConfigError("methods", "must be a nonempty array");
  }
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto path = Index("methods", i);
    Method m;
    try {
      m = ParseMethod(AsString(methods[i], path));
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(path, e.what());
    }
    if (std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end()) {
      throw ConfigError(path, "duplicate method");
    }
    if (m == Method::kCalibration &&
        (cfg.notion == FairnessNotion::kDisparateImpact ||
         cfg.notion == FairnessNotion::kEqualizedOdds)) {
      throw ConfigError(path, "calibration is not available for " +
                                  std::string(ToString(cfg.notion)));
    }
    cfg.methods.push_back(m);
  }

  if (const json* split = Find(doc, "split")) {
    RequireObject(*split, "split");
    CheckKeys(*split, "split", {"test_fraction"});
    if (const json* v = Find(*split, "test_fraction")) {
      cfg.test_fraction = AsNumber(*v, "split.test_fraction");
    }
  }
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw ConfigError("split.test_fraction", "must lie strictly between 0 and 1");
  }

  if (const json* rw = Find(doc, "reweigh")) {
    RequireObject(*rw, "reweigh");
    CheckKeys(*rw, "reweigh", {"eta", "loops"});
    if (const json* v = Find(*rw, "eta")) cfg.reweigh.eta = AsNumber(*v, "reweigh.eta");
    if (const json* v = Find(*rw, "loops")) {
      const auto loops = AsInteger(*v, "reweigh.loops");
      if (loops < 0) throw ConfigError("reweigh.loops", "must be >= 0");
      cfg.reweigh.loops = static_cast<int>(loops);
    }
    if (!(cfg.reweigh.eta > 0.0)) throw ConfigError("reweigh.eta", "must be > 0");
  }

  if (const json* tr = Find(doc, "train")) {
    RequireObject(*tr, "train");
    CheckKeys(*tr, "train", {"l2_strength", "max_iterations", "step_size",
                             "gradient_tolerance", "solver"});
    if (const json* v = Find(*tr, "l2_strength")) {
      cfg.train.l2_strength = AsNumber(*v, "train.l2_strength");
      if (cfg.train.l2_strength < 0.0) {
        throw ConfigError("train.l2_strength", "must be >= 0");
      }
      cfg.l2_specified = true;
    }
    if (const json* v = Find(*tr, "max_iterations")) {
      const auto it = AsInteger(*v, "train.max_iterations");
      if (it < 1) throw ConfigError("train.max_iterations", "must be >= 1");
      cfg.train.max_iterations = static_cast<int>(it);
    }
    if (const json* v = Find(*tr, "step_size")) {
      cfg.train.step_size = AsNumber(*v, "train.step_size");
      if (!(cfg.train.step_size > 0.0)) {
        throw ConfigError("train.step_size", "must be > 0");
      }
    }
    if (const json* v = Find(*tr, "gradient_tolerance")) {
      cfg.train.gradient_tolerance = AsNumber(*v, "train.gradient_tolerance");
      if (!(cfg.train.gradient_tolerance > 0.0)) {
        throw ConfigError("train.gradient_tolerance", "must be > 0");
      }
    }
    if (const json* v = Find(*tr, "solver")) {
      try {
        cfg.train.solver = ParseSolver(AsString(*v, "train.solver"));
      } catch (const ConfigError&) {
        throw;
      } catch (const InvalidArgument& e) {
        throw ConfigError("train.solver", e.what());
      }
    }
  }

  cfg.output_path = Resolve(
      base_dir, AsString(Require(doc, "", "output_path"), "output_path"));
  if (const json* v = Find(doc, "include_trace")) {
    cfg.include_trace = AsBool(*v, "include_trace");
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return ParseConfig(doc, path.parent_path());
}

json ConfigToJson(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  if (const auto* src = std::get_if<CsvSource>(&cfg.dataset)) {
    json specs = json::array();
    for (const auto& s : src->options.group_specs) specs.push_back(GroupSpecToJson(s));
    j["dataset"] = {{"path", src->path.generic_string()},
                    {"label_column", src->options.label_column},
                    {"drop_columns", src->options.drop_columns},
                    {"categorical_columns", src->options.categorical_columns},
                    {"group_specs", specs}};
  } else {
    const auto& gen = std::get<SyntheticSource>(cfg.dataset).generator;
    j["dataset"] = {{"synthetic",
                     {{"n", gen.n},
                      {"d", gen.d},
                      {"group_fraction", gen.group_fraction},
                      {"lambda_star", VectorToJson(gen.lambda_star)},
                      {"tilt", ToString(gen.tilt)},
                      {"signal_strength", gen.signal_strength},
                      {"model_seed", gen.model_seed}}}};
  }
  j["masked_columns"] = cfg.masked_columns;
  j["notion"] = ToString(cfg.notion);
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(ToString(m));
  j["methods"] = methods;
  j["split"] = {{"test_fraction", cfg.test_fraction}};
  j["seed"] = cfg.seed;
  j["reweigh"] = {{"eta", cfg.reweigh.eta}, {"loops", cfg.reweigh.loops}};
  json train = {{"max_iterations", cfg.train.max_iterations},
                {"step_size", cfg.train.step_size},
                {"gradient_tolerance", cfg.train.gradient_tolerance},
                {"solver", ToString(cfg.train.solver)}};
  if (cfg.l2_specified) train["l2_strength"] = cfg.train.l2_strength;
  j["train"] = train;
  j["output_path"] = cfg.output_path.generic_string();
  j["include_trace"] = cfg.include_trace;
  return j;
}

ExperimentReport RunExperiment(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  report.dataset_name = cfg.name;

  std::optional<LabeledDataset> full;
  std::optional<Vector> true_labels;
  if (const auto* src = std::get_if<CsvSource>(&cfg.dataset)) {
    full = LoadCsv(src->path, src->options);
  } else {
    GeneratorConfig gen = std::get<SyntheticSource>(cfg.dataset).generator;
    gen.seed = cfg.seed + kSyntheticSeedOffset;
    SyntheticTask task = Generate(gen);
    true_labels = task.true_labels;
    full = std::move(task.dataset);
  }

  const SplitIndices split =
      MakeSplitIndices(full->rows(), SplitConfig{cfg.test_fraction, cfg.seed});
  LabeledDataset train = full->Subset(split.train);
  LabeledDataset test = full->Subset(split.test);
  try {
    train.RequireProperGroups();
    train.RequireBothClasses();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("training split: ") + e.what());
  }
  if (cfg.notion == FairnessNotion::kDisparateImpact) {
    train = MaskGroupFeatures(train, cfg.masked_columns);
    test = MaskGroupFeatures(test, cfg.masked_columns);
  }
  std::optional<Vector> test_true;
  if (true_labels) {
    test_true = Vector(static_cast<Eigen::Index>(split.test.size()));
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      (*test_true)(static_cast<Eigen::Index>(i)) = (*true_labels)(split.test[i]);
    }
  }

  TrainConfig tcfg = cfg.train;
  if (!cfg.l2_specified) {
    tcfg.l2_strength = TrainConfig::UnitPenaltyFor(train.rows()).l2_strength;
  }
  const ConstraintSet cs_train =
      ConstraintSet::Create(cfg.notion, ComputeBaseRates(train));
  const ConstraintSet cs_test =
      ConstraintSet::ForEvaluation(cfg.notion, ComputeBaseRatesUnchecked(test));

  report.train_rows = train.rows();
  report.test_rows = test.rows();
  report.feature_names = train.feature_names();
  report.group_names = train.group_names();

  std::optional<ModelParams> unconstrained;
  auto base_model = [&]() -> const ModelParams& {
    if (!unconstrained) unconstrained = TrainUnconstrained(train, tcfg);
    return *unconstrained;
  };

  for (Method method : cfg.methods) {
    MethodResult r;
    r.method = method;
    Vector train_pred, test_pred;
    try {
      switch (method) {
        case Method::kUnconstrained:
          r.model = base_model();
          break;
        case Method::kCalibration: {
          r.model = base_model();
          const CalibratedModel cm = Calibrate(r.model, train, cs_train);
          r.thresholds = cm.thresholds;
          train_pred = PredictCalibrated(cm, train.features(), train.groups());
          test_pred = PredictCalibrated(cm, test.features(), test.groups());
          break;
        }
        case Method::kReweigh:
        case Method::kReweighSampling: {
          FitResult fit =
              method == Method::kReweigh
                  ? Fit(train, cs_train, cfg.reweigh, tcfg)
                  : FitSampling(train, cs_train, cfg.reweigh, tcfg,
                                cfg.seed + kSamplingSeedOffset);
          r.model = std::move(fit.model);
          r.multipliers = std::move(fit.multipliers);
          if (cfg.include_trace) r.trace = std::move(fit.trace);
          break;
        }
      }
      if (method != Method::kCalibration) {
        train_pred = PredictLabel(r.model, train.features());
        test_pred = PredictLabel(r.model, test.features());
      }
    } catch (const Error& e) {
      throw Error("method " + std::string(ToString(method)) + ": " + e.what());
    }
    r.train_error = ErrorRate(train_pred, train.labels());
    r.train_violation_max = MaxAbsViolation(Violation(cs_train, train, train_pred));
    r.test_error = ErrorRate(test_pred, test.labels());
    r.test_violation = Violation(cs_test, test, test_pred);
    r.test_violation_max = MaxAbsViolation(r.test_violation);
    if (test_true) r.test_true_label_accuracy = 1.0 - ErrorRate(test_pred, *test_true);
    report.results.push_back(std::move(r));
  }
  report.timestamp = UtcTimestamp();
  return report;
}

json ToJson(const ModelParams& m) {
  return {{"coefficients", VectorToJson(m.coefficients)}, {"intercept", m.intercept}};
}

ModelParams ModelParamsFromJson(const json& j) {
  if (!j.is_object() || !j.contains("coefficients") || !j.contains("intercept")) {
    throw InvalidArgument("model JSON needs coefficients and intercept");
  }
  ModelParams m;
  m.coefficients = AsVector(j.at("coefficients"), "coefficients");
  m.intercept = AsNumber(j.at("intercept"), "intercept");
  return m;
}

json ToJson(const Multipliers& m) {
  if (m.paired()) {
    return {{"lambda_tp", VectorToJson(m.primary())},
            {"lambda_fp", VectorToJson(m.false_positive())}};
  }
  return {{"lambda", VectorToJson(m.primary())}};
}

Multipliers MultipliersFromJson(const json& j) {
  if (j.contains("lambda")) return Multipliers::Single(AsVector(j.at("lambda"), "lambda"));
  if (j.contains("lambda_tp") && j.contains("lambda_fp")) {
    return Multipliers::Paired(AsVector(j.at("lambda_tp"), "lambda_tp"),
                               AsVector(j.at("lambda_fp"), "lambda_fp"));
  }
  throw InvalidArgument("multiplier JSON needs lambda or lambda_tp/lambda_fp");
}

json ReportToJson(const ExperimentReport& report) {
  json j;
  j["schema_version"] = 1;
  j["dataset"] = report.dataset_name;
  j["notion"] = ToString(report.config.notion);
  j["seed"] = report.config.seed;
  j["timestamp"] = report.timestamp;
  j["config"] = ConfigToJson(report.config);
  j["data"] = {{"train_rows", report.train_rows},
               {"test_rows", report.test_rows},
               {"features", report.feature_names},
               {"groups", report.group_names}};
  json methods = json::array();
  for (const auto& r : report.results) {
    json m;
    m["method"] = ToString(r.method);
    m["test_error"] = r.test_error;
    m["test_violation_max"] = r.test_violation_max;
    m["violation_vector"] = VectorToJson(r.test_violation);
    m["train_error"] = r.train_error;
    m["train_violation_max"] = r.train_violation_max;
    m["model"] = ToJson(r.model);
    if (r.multipliers) m["multipliers"] = ToJson(*r.multipliers);
    if (!r.trace.empty()) {
      json trace = json::array();
      for (const auto& delta : r.trace) trace.push_back(VectorToJson(delta));
      m["trace"] = trace;
    }
    if (!r.thresholds.empty()) m["thresholds"] = r.thresholds;
    if (r.test_true_label_accuracy) {
      m["test_true_label_accuracy"] = *r.test_true_label_accuracy;
    }
    methods.push_back(std::move(m));
  }
  j["methods"] = methods;
  return j;
}

void ValidateReport(const json& report) {
  if (!report.is_object()) Invalid("$", "must be an object");
  const json& version = Member(report, "", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    Invalid("schema_version", "must be 1");
  }
  if (!Member(report, "", "dataset").is_string()) Invalid("dataset", "must be a string");
  const json& notion = Member(report, "", "notion");
  if (!notion.is_string()) Invalid("notion", "must be a string");
  try {
    ParseNotion(notion.get<std::string>());
  } catch (const InvalidArgument& e) {
    Invalid("notion", e.what());
  }
  if (!Member(report, "", "seed").is_number_unsigned() &&
      !(Member(report, "", "seed").is_number_integer() &&
        Member(report, "", "seed").get<std::int64_t>() >= 0)) {
    Invalid("seed", "must be a nonnegative integer");
  }
  if (!Member(report, "", "timestamp").is_string()) Invalid("timestamp", "must be a string");
  if (!Member(report, "", "config").is_object()) Invalid("config", "must be an object");

  const json& data = Member(report, "", "data");
  for (const char* key : {"train_rows", "test_rows"}) {
    const json& v = Member(data, "data", key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      Invalid(Join("data", key), "must be a positive integer");
    }
  }
  StringArray(Member(data, "data", "features"), "data.features");
  StringArray(Member(data, "data", "groups"), "data.groups");
  const std::size_t d = data.at("features").size();
  const std::size_t k = data.at("groups").size();
  const bool paired = notion.get<std::string>() == "equalized_odds";

  const json& methods = Member(report, "", "methods");
  if (!methods.is_array() || methods.empty()) Invalid("methods", "must be a nonempty array");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string p = Index("methods", i);
    const json& m = methods[i];
    const json& name = Member(m, p, "method");
    if (!name.is_string()) Invalid(Join(p, "method"), "must be a string");
    try {
      ParseMethod(name.get<std::string>());
    } catch (const InvalidArgument& e) {
      Invalid(Join(p, "method"), e.what());
    }
    NumberIn(Member(m, p, "test_error"), Join(p, "test_error"), 0.0, 1.0);
    NumberIn(Member(m, p, "train_error"), Join(p, "train_error"), 0.0, 1.0);
    const double vmax = NumberIn(Member(m, p, "test_violation_max"),
                                 Join(p, "test_violation_max"), 0.0, HUGE_VAL);
    NumberIn(Member(m, p, "train_violation_max"), Join(p, "train_violation_max"),
             0.0, HUGE_VAL);
    const json& vec = Member(m, p, "violation_vector");
    NumberArray(vec, Join(p, "violation_vector"));
    if (vec.size() != (paired ? 2 * k : k)) {
      Invalid(Join(p, "violation_vector"), "length must match the constraint count");
    }
    double largest = 0.0;
    for (const auto& x : vec) largest = std::max(largest, std::abs(x.get<double>()));
    if (largest != vmax) {
      Invalid(Join(p, "test_violation_max"), "must equal max |violation_vector|");
    }
    const json& model = Member(m, p, "model");
    NumberArray(Member(model, Join(p, "model"), "coefficients"),
                Join(p, "model.coefficients"));
    if (model.at("coefficients").size() != d) {
      Invalid(Join(p, "model.coefficients"), "length must match data.features");
    }
    NumberIn(Member(model, Join(p, "model"), "intercept"), Join(p, "model.intercept"),
             -HUGE_VAL, HUGE_VAL);
    if (m.contains("multipliers")) {
      const json& mult = m.at("multipliers");
      const std::string mp = Join(p, "multipliers");
      if (paired) {
        NumberArray(Member(mult, mp, "lambda_tp"), Join(mp, "lambda_tp"));
        NumberArray(Member(mult, mp, "lambda_fp"), Join(mp, "lambda_fp"));
      } else {
        NumberArray(Member(mult, mp, "lambda"), Join(mp, "lambda"));
      }
    }
    if (m.contains("trace")) {
      const json& trace = m.at("trace");
      if (!trace.is_array()) Invalid(Join(p, "trace"), "must be an array");
      for (std::size_t t = 0; t < trace.size(); ++t) {
        NumberArray(trace[t], Index(Join(p, "trace"), t));
      }
    }
    if (m.contains("thresholds")) {
      const json& th = m.at("thresholds");
      if (!th.is_object()) Invalid(Join(p, "thresholds"), "must be an object");
      for (const auto& item : th.items()) {
        NumberIn(item.value(), Join(Join(p, "thresholds"), item.key()), 0.0, 1.0);
      }
    }
    if (m.contains("test_true_label_accuracy")) {
      NumberIn(m.at("test_true_label_accuracy"), Join(p, "test_true_label_accuracy"),
               0.0, 1.0);
    }
  }
}

std::filesystem::path WriteReport(const ExperimentReport& report) {
  const json doc = ReportToJson(report);
  ValidateReport(doc);
  const auto& out_path = report.config.output_path;
  if (out_path.has_parent_path()) {
    std::filesystem::create_directories(out_path.parent_path());
  }
  {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write report: " + out_path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed: " + out_path.string());
  }
  auto csv_path = out_path;
  csv_path.replace_extension(".csv");
  csv::Table table;
  table.header = {"dataset", "notion", "method", "test_error", "test_violation_max"};
  for (const auto& r : report.results) {
    table.rows.push_back({report.dataset_name,
                          std::string(ToString(report.config.notion)),
                          std::string(ToString(r.method)),
                          json(r.test_error).dump(),
                          json(r.test_violation_max).dump()});
  }
  csv::WriteFile(csv_path, table);
  return csv_path;
}

void PrintSummary(const ExperimentReport& report, std::ostream& out) {
  out << report.dataset_name << " / " << ToString(report.config.notion) << "  (train "
      << report.train_rows << ", test " << report.test_rows << ")\n";
  out << std::left << std::setw(18) << "method" << std::right << std::setw(12)
      << "test err" << std::setw(12) << "test vio" << std::setw(12) << "train vio";
  const bool synthetic = std::holds_alternative<SyntheticSource>(report.config.dataset);
  if (synthetic) out << std::setw(14) << "true-acc";
  out << '\n';
  for (const auto& r : report.results) {
    out << std::left << std::setw(18) << ToString(r.method) << std::right
        << std::fixed << std::setprecision(2) << std::setw(11) << 100.0 * r.test_error
        << '%' << std::setprecision(4) << std::setw(12) << r.test_violation_max
        << std::setw(12) << r.train_violation_max;
    if (r.test_true_label_accuracy) {
      out << std::setprecision(2) << std::setw(13) << 100.0 * *r.test_true_label_accuracy
          << '%';
    }
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fairlabel
