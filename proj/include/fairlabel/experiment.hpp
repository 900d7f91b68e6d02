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

#ifndef FAIRLABEL_EXPERIMENT_HPP_
#define FAIRLABEL_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairlabel/biasgen.hpp"
#include "fairlabel/classifier.hpp"
#include "fairlabel/constraints.hpp"
#include "fairlabel/dataset.hpp"
#include "fairlabel/reweigh.hpp"

namespace fairlabel {

enum class Method { kUnconstrained, kCalibration, kReweigh, kReweighSampling };

std::string_view ToString(Method method);
Method ParseMethod(std::string_view name);

/// Raised for schema violations; the message starts with the field path,
/// e.g. "dataset.group_specs[1].num_bins: must be >= 2".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : InvalidArgument(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct CsvSource {
  /// Resolved against the config file's directory when relative.
  std::filesystem::path path;
  CsvLoadOptions options;
};

struct SyntheticSource {
  GeneratorConfig generator;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::variant<CsvSource, SyntheticSource> dataset;
  /// Features withheld from the classifier under disparate impact.
  std::vector<std::string> masked_columns;
  FairnessNotion notion = FairnessNotion::kDemographicParity;
  std::vector<Method> methods;
  double test_fraction = 0.3;
  /// Root seed. The split uses seed, synthetic generation seed + 1000 and
  /// sampling masks seed + 2000 (+ loop iteration).
  std::uint64_t seed = 0;
  ReweighConfig reweigh;
  TrainConfig train;
  /// When false the L2 strength is TrainConfig::UnitPenaltyFor(train rows).
  bool l2_specified = false;
  std::filesystem::path output_path;
  bool include_trace = true;
};

inline constexpr std::uint64_t kSyntheticSeedOffset = 1000;
inline constexpr std::uint64_t kSamplingSeedOffset = 2000;

/// Parses and validates a config document. Relative paths resolve against
/// `base_dir`.
ExperimentConfig ParseConfig(const nlohmann::json& doc,
                             const std::filesystem::path& base_dir);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

/// Normalized JSON form of a config (what the report echoes).
nlohmann::json ConfigToJson(const ExperimentConfig& cfg);

struct MethodResult {
  Method method;
  double test_error = 0.0;
  double test_violation_max = 0.0;
  Vector test_violation;
  double train_error = 0.0;
  double train_violation_max = 0.0;
  /// Accuracy against simulator true labels (synthetic data only).
  std::optional<double> test_true_label_accuracy;
  ModelParams model;
  std::optional<Multipliers> multipliers;
  std::vector<Vector> trace;
  std::map<std::string, double> thresholds;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string dataset_name;
  Eigen::Index train_rows = 0;
  Eigen::Index test_rows = 0;
  std::vector<std::string> feature_names;
  std::vector<std::string> group_names;
  std::vector<MethodResult> results;
  std::string timestamp;
};

/// Runs every configured method on one split. Does not touch the filesystem
/// beyond reading the dataset.
ExperimentReport RunExperiment(const ExperimentConfig& cfg);

nlohmann::json ReportToJson(const ExperimentReport& report);

/// Structural check of a report document against the shipped schema
/// (docs/report.schema.json). Throws Error describing the first problem.
void ValidateReport(const nlohmann::json& report);

/// Writes the JSON report to cfg.output_path and a per-method summary CSV
/// (dataset, notion, method, test_error, test_violation_max) next to it
/// with a .csv extension. Returns the CSV path.
std::filesystem::path WriteReport(const ExperimentReport& report);

/// Human-readable table of the per-method results.
void PrintSummary(const ExperimentReport& report, std::ostream& out);

/// Current UTC time as ISO 8601.
std::string UtcTimestamp();

nlohmann::json ToJson(const ModelParams& m);
ModelParams ModelParamsFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Multipliers& m);
Multipliers MultipliersFromJson(const nlohmann::json& j);

}  // namespace fairlabel

#endif  // FAIRLABEL_EXPERIMENT_HPP_
