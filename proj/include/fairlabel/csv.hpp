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

#ifndef FAIRLABEL_CSV_HPP_
#define FAIRLABEL_CSV_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairlabel::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of the first column called `name`, if any.
  std::optional<std::size_t> Find(std::string_view name) const;
};

/// Splits one record. Handles double-quoted fields with "" escapes; fields are
/// trimmed of surrounding whitespace.
std::vector<std::string> SplitRecord(std::string_view line, char delimiter);

/// Reads a table whose first non-empty line is the header. Every record must
/// have as many fields as the header.
Table ReadTable(std::istream& in, char delimiter = ',');
Table ReadFile(const std::filesystem::path& path, char delimiter = ',');

void WriteTable(std::ostream& out, const Table& table);
void WriteFile(const std::filesystem::path& path, const Table& table);

/// Strict double parse of the whole (trimmed) string.
std::optional<double> ParseDouble(std::string_view s);

}  // namespace fairlabel::csv

#endif  // FAIRLABEL_CSV_HPP_
