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

// fairlabel command-line front end.
//
//   fairlabel run --config exp.json [--seed 7]
//   fairlabel prepare --dataset german --out data/prepared [--raw-dir data/raw]

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fairlabel/experiment.hpp"
#include "fairlabel/prepare.hpp"

namespace {

int Run(const std::string& config_path, std::optional<std::uint64_t> seed) {
  fairlabel::ExperimentConfig cfg = fairlabel::LoadConfig(config_path);
  if (seed) cfg.seed = *seed;
  const fairlabel::ExperimentReport report = fairlabel::RunExperiment(cfg);
  const auto csv_path = fairlabel::WriteReport(report);
  fairlabel::PrintSummary(report, std::cout);
  std::cout << "report: " << cfg.output_path.string() << "\nsummary: "
            << csv_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-bias correction by example reweighting"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config's seed");

  auto* prepare = app.add_subcommand("prepare", "Convert a benchmark dataset");
  fairlabel::PrepareOptions popts;
  std::string raw_dir;
  bool offline = false;
  prepare->add_option("--dataset", popts.dataset, "adult, german, compas or bank")
      ->required()
      ->check(CLI::IsMember(fairlabel::BenchmarkNames()));
  prepare->add_option("--out", popts.out_dir, "Output directory")->required();
  prepare->add_option("--raw-dir", raw_dir,
                      "Directory holding raw files (searched before the cache)");
  prepare->add_flag("--offline", offline, "Never download missing raw files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return Run(config_path, seed);
    if (!raw_dir.empty()) popts.raw_dir = raw_dir;
    popts.allow_download = !offline;
    const auto result = fairlabel::Prepare(popts);
    std::cout << "wrote " << result.rows << " rows to " << result.csv_path.string()
              << "\nconfig: " << result.config_path.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
