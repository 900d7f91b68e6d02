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

#ifndef FAIRLABEL_PREPARE_HPP_
#define FAIRLABEL_PREPARE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fairlabel {

/// Benchmarks known to `Prepare`: adult, german, compas, bank.
const std::vector<std::string>& BenchmarkNames();

/// Environment variable naming the raw-file cache directory.
inline constexpr const char* kDataDirEnv = "FAIRLABEL_DATA_DIR";

/// $FAIRLABEL_DATA_DIR, else $XDG_CACHE_HOME/fairlabel, else
/// $HOME/.cache/fairlabel.
std::filesystem::path CacheDir();

struct PrepareOptions {
  std::string dataset;
  std::filesystem::path out_dir;
  /// Searched before the cache directory.
  std::optional<std::filesystem::path> raw_dir;
  /// Fetch missing raw files into the cache directory.
  bool allow_download = true;
};

struct PrepareResult {
  std::filesystem::path csv_path;
  std::filesystem::path config_path;
  std::size_t rows = 0;
};

/// Converts a raw benchmark into <out>/<name>.csv (raw categorical values,
/// binary "label" column) plus <out>/<name>.config.json holding the
/// benchmark's protected-group definitions. Throws Error with a hint on
/// where to place the raw file when it cannot be found or fetched.
PrepareResult Prepare(const PrepareOptions& options);

/// The default experiment config written next to a prepared CSV.
nlohmann::json DefaultBenchmarkConfig(std::string_view dataset);

/// Fetches `url` into `dest` (via a temporary file). Throws Error on failure.
void DownloadFile(const std::string& url, const std::filesystem::path& dest);

}  // namespace fairlabel

#endif  // FAIRLABEL_PREPARE_HPP_
