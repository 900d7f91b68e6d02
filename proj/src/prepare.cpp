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

#include "fairlabel/prepare.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>

#include <curl/curl.h>

#include "fairlabel/common.hpp"
#include "fairlabel/csv.hpp"

namespace fairlabel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RawFile {
  std::string name;
  std::string url;  // empty: no stable direct download
};

const std::vector<RawFile>& RawFilesFor(std::string_view dataset) {
  static const std::vector<RawFile> adult = {
      {"adult.data",
       "https://archive.ics.uci.edu/ml/machine-learning-databases/adult/adult.data"},
      {"adult.test",
       "https://archive.ics.uci.edu/ml/machine-learning-databases/adult/adult.test"}};
  static const std::vector<RawFile> german = {
      {"german.data",
       "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/"
       "german/german.data"}};
  static const std::vector<RawFile> compas = {
      {"compas-scores-two-years.csv",
       "https://raw.githubusercontent.com/propublica/compas-analysis/master/"
       "compas-scores-two-years.csv"}};
  // Distributed only inside a zip archive.
  static const std::vector<RawFile> bank = {{"bank-full.csv", ""}};
  if (dataset == "adult") return adult;
  if (dataset == "german") return german;
  if (dataset == "compas") return compas;
  if (dataset == "bank") return bank;
  throw InvalidArgument("unknown dataset '" + std::string(dataset) +
                        "'; expected adult, german, compas or bank");
}

fs::path LocateRaw(const RawFile& file, const PrepareOptions& options) {
  if (options.raw_dir && fs::is_regular_file(*options.raw_dir / file.name)) {
    return *options.raw_dir / file.name;
  }
  const fs::path cache = CacheDir();
  if (fs::is_regular_file(cache / file.name)) return cache / file.name;

  const std::string hint = "place " + file.name + " in " + cache.string() +
                           " (or set " + kDataDirEnv + ", or pass --raw-dir)";
  if (file.url.empty()) {
    throw Error(file.name + " not found and cannot be downloaded directly; " +
                hint);
  }
  if (!options.allow_download) {
    throw Error(file.name + " not found and downloads are disabled; " + hint);
  }
  try {
    fs::create_directories(cache);
    DownloadFile(file.url, cache / file.name);
  } catch (const std::exception& e) {
    throw Error(std::string(e.what()) + "; " + hint);
  }
  return cache / file.name;
}

std::vector<std::vector<std::string>> ReadRecords(const fs::path& path,
                                                  char delimiter,
                                                  std::size_t fields) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '|') continue;  // adult.test preamble
    auto record = delimiter == ' '
                      ? std::vector<std::string>{}
                      : csv::SplitRecord(line, delimiter);
    if (delimiter == ' ') {
      std::size_t pos = 0;
      while (pos < line.size()) {
        const auto start = line.find_first_not_of(' ', pos);
        if (start == std::string::npos) break;
        const auto end = std::min(line.find(' ', start), line.size());
        record.push_back(line.substr(start, end - start));
        pos = end;
      }
    }
    if (record.size() != fields) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(fields) + " fields, found " +
                  std::to_string(record.size()));
    }
    rows.push_back(std::move(record));
  }
  return rows;
}

std::size_t Column(const csv::Table& t, std::string_view name,
                   const fs::path& path) {
  const auto idx = t.Find(name);
  if (!idx) {
    throw Error(path.string() + ": missing column '" + std::string(name) + "'");
  }
  return *idx;
}

double Number(const std::string& s, const fs::path& path) {
  const auto v = csv::ParseDouble(s);
  if (!v) throw Error(path.string() + ": unparseable number '" + s + "'");
  return *v;
}

// "YYYY-MM-DD HH:MM:SS" as seconds since the epoch.
std::optional<double> ParseTimestamp(const std::string& s) {
  int y, mo, d, h, mi, sec;
  if (std::sscanf(s.c_str(), "%d-%d-%d %d:%d:%d", &y, &mo, &d, &h, &mi, &sec) != 6) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  const auto days_since = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days_since) * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
}

std::string FormatInt(double v) { return std::to_string(std::llround(v)); }

struct Bucket {
  double upper;  // inclusive
  const char* label;
};

// Label of the first bucket whose upper bound is >= v.
std::string Bucketize(const std::string& cell, const std::vector<Bucket>& buckets,
                      const fs::path& path) {
  const double v = Number(cell, path);
  for (const auto& b : buckets) {
    if (v <= b.upper) return b.label;
  }
  return buckets.back().label;
}

csv::Table PrepareAdult(const std::vector<fs::path>& raw) {
  static const std::vector<std::string> names = {
      "age", "workclass", "fnlwgt", "education", "education_num",
      "marital_status", "occupation", "relationship", "race", "sex",
      "capital_gain", "capital_loss", "hours_per_week", "native_country",
      "income"};
  static const std::vector<std::string> kept = {
      "age", "workclass", "education_num", "marital_status", "occupation",
      "relationship", "race", "sex", "capital_gain", "capital_loss",
      "hours_per_week", "native_country"};
  csv::Table out;
  out.header = kept;
  out.header.push_back("label");
  for (const auto& path : raw) {
    for (auto& rec : ReadRecords(path, ',', names.size())) {
      if (std::any_of(rec.begin(), rec.end(),
                      [](const std::string& f) { return f == "?"; })) {
        continue;
      }
      std::string income = rec.back();
      if (!income.empty() && income.back() == '.') income.pop_back();
      if (income != ">50K" && income != "<=50K") {
        throw Error(path.string() + ": unexpected income value '" + income + "'");
      }
      std::vector<std::string> row;
      for (const auto& col : kept) {
        const auto j = static_cast<std::size_t>(
            std::find(names.begin(), names.end(), col) - names.begin());
        row.push_back(rec[j]);
      }
      // Native country collapses to US / non-US; continuous columns except
      // education_num become fixed buckets.
      row.back() = row.back() == "United-States" ? "United-States" : "Other";
      static const std::vector<Bucket> age = {
          {24, "17-24"}, {34, "25-34"}, {44, "35-44"}, {54, "45-54"},
          {64, "55-64"}, {HUGE_VAL, "65+"}};
      static const std::vector<Bucket> gain = {
          {0, "0"}, {5000, "1-5000"}, {HUGE_VAL, "5001+"}};
      static const std::vector<Bucket> loss = {
          {0, "0"}, {1500, "1-1500"}, {HUGE_VAL, "1501+"}};
      static const std::vector<Bucket> hours = {
          {24, "1-24"}, {39, "25-39"}, {40, "40"}, {49, "41-49"}, {HUGE_VAL, "50+"}};
      row[0] = Bucketize(row[0], age, path);
      row[8] = Bucketize(row[8], gain, path);
      row[9] = Bucketize(row[9], loss, path);
      row[10] = Bucketize(row[10], hours, path);
      row.push_back(income == ">50K" ? "1" : "0");
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

csv::Table PrepareGerman(const fs::path& raw) {
  csv::Table out;
  out.header = {"checking_status", "duration", "credit_history", "purpose",
                "credit_amount", "savings", "employment", "installment_rate",
                "personal_status", "other_debtors", "residence_since", "property",
                "age", "other_installment_plans", "housing", "existing_credits",
                "job", "num_dependents", "own_telephone", "foreign_worker", "label"};
  for (auto& rec : ReadRecords(raw, ' ', out.header.size())) {
    // Class 1 is a good credit risk, 2 a bad one.
    if (rec.back() != "1" && rec.back() != "2") {
      throw Error(raw.string() + ": unexpected class '" + rec.back() + "'");
    }
    rec.back() = rec.back() == "1" ? "1" : "0";
    out.rows.push_back(std::move(rec));
  }
  return out;
}

csv::Table PrepareCompas(const fs::path& raw) {
  const csv::Table t = csv::ReadFile(raw);
  const auto c = [&](std::string_view n) { return Column(t, n, raw); };
  const auto screening = c("days_b_screening_arrest"), is_recid = c("is_recid"),
             degree = c("c_charge_degree"), score_text = c("score_text"),
             jail_in = c("c_jail_in"), jail_out = c("c_jail_out"),
             label = c("two_year_recid");
  const std::vector<std::string> passthrough = {
      "age", "sex", "race", "juv_fel_count", "juv_misd_count", "juv_other_count",
      "priors_count", "c_charge_degree", "decile_score"};
  std::vector<std::size_t> idx;
  for (const auto& n : passthrough) idx.push_back(c(n));

  csv::Table out;
  out.header = passthrough;
  out.header.push_back("days_in_jail");
  out.header.push_back("label");
  for (const auto& rec : t.rows) {
    // Standard recidivism-analysis filters.
    if (rec[screening].empty()) continue;
    const double gap = Number(rec[screening], raw);
    if (gap > 30 || gap < -30) continue;
    if (rec[is_recid] == "-1") continue;
    if (rec[degree] == "O") continue;
    if (rec[score_text] == "N/A") continue;

    std::vector<std::string> row;
    for (auto j : idx) row.push_back(rec[j]);
    const auto in = ParseTimestamp(rec[jail_in]);
    const auto out_time = ParseTimestamp(rec[jail_out]);
    double days = 0.0;
    if (in && out_time) days = std::floor((*out_time - *in) / 86400.0);
    row.push_back(FormatInt(days));
    if (rec[label] != "0" && rec[label] != "1") {
      throw Error(raw.string() + ": unexpected two_year_recid '" + rec[label] + "'");
    }
    row.push_back(rec[label]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

csv::Table PrepareBank(const fs::path& raw) {
  csv::Table t = csv::ReadFile(raw, ';');
  const auto y = Column(t, "y", raw);
  Column(t, "age", raw);
  csv::Table out;
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (j != y) out.header.push_back(t.header[j]);
  }
  out.header.push_back("label");
  for (auto& rec : t.rows) {
    if (rec[y] != "yes" && rec[y] != "no") {
      throw Error(raw.string() + ": unexpected y value '" + rec[y] + "'");
    }
    std::vector<std::string> row;
    for (std::size_t j = 0; j < rec.size(); ++j) {
      if (j != y) row.push_back(std::move(rec[j]));
    }
    row.push_back(rec[y] == "yes" ? "1" : "0");
    out.rows.push_back(std::move(row));
  }
  return out;
}

json Categorical(const std::string& name, const std::string& column,
                 const std::string& value) {
  return {{"name", name}, {"rule", "categorical_equals"}, {"column", column},
          {"value", value}};
}

std::size_t WriteCallback(char* data, std::size_t size, std::size_t nmemb,
                          void* stream) {
  auto* out = static_cast<std::ofstream*>(stream);
  out->write(data, static_cast<std::streamsize>(size * nmemb));
  return *out ? size * nmemb : 0;
}

}  // namespace

const std::vector<std::string>& BenchmarkNames() {
  static const std::vector<std::string> names = {"adult", "german", "compas", "bank"};
  return names;
}

fs::path CacheDir() {
  if (const char* dir = std::getenv(kDataDirEnv); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "fairlabel";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "fairlabel";
  }
  return fs::current_path() / ".fairlabel-cache";
}

json DefaultBenchmarkConfig(std::string_view dataset) {
  json groups = json::array();
  json masked;
  double test_fraction = 0.3;
  json categorical = json::array();
  if (dataset == "adult") {
    groups = {Categorical("Male", "sex", "Male"), Categorical("Female", "sex", "Female"),
              Categorical("Black", "race", "Black"), Categorical("White", "race", "White")};
    masked = {"sex", "race"};
    // Matches the size of the original held-out file.
    test_fraction = 1.0 / 3.0;
  } else if (dataset == "german") {
    groups = {{{"name", "age<30"}, {"rule", "numeric_threshold"}, {"column", "age"},
               {"cutoff", 30}, {"direction", "below"}},
              {{"name", "age>=30"}, {"rule", "numeric_threshold"}, {"column", "age"},
               {"cutoff", 30}, {"direction", "at_or_above"}}};
    masked = {"age"};
  } else if (dataset == "compas") {
    groups = {Categorical("Black", "race", "African-American"),
              Categorical("White", "race", "Caucasian"),
              Categorical("Male", "sex", "Male"), Categorical("Female", "sex", "Female")};
    masked = {"sex", "race"};
  } else if (dataset == "bank") {
    for (int b = 0; b < 5; ++b) {
      groups.push_back({{"name", "age_q" + std::to_string(b)},
                        {"rule", "quantile_bin"},
                        {"column", "age"},
                        {"num_bins", 5},
                        {"bin_index", b}});
    }
    masked = {"age"};
  } else {
    RawFilesFor(dataset);  // throws the unknown-dataset error
  }
  const std::string name(dataset);
  return {{"name", name},
          {"dataset",
           {{"path", name + ".csv"},
            {"label_column", "label"},
            {"drop_columns", json::array()},
            {"categorical_columns", categorical},
            {"group_specs", groups}}},
          {"masked_columns", masked},
          {"notion", "demographic_parity"},
          {"methods", {"unconstrained", "calibration", "reweigh"}},
          {"split", {{"test_fraction", test_fraction}}},
          {"seed", 0},
          {"reweigh", {{"eta", 1.0}, {"loops", 100}}},
          {"output_path", name + ".report.json"}};
}

PrepareResult Prepare(const PrepareOptions& options) {
  const auto& files = RawFilesFor(options.dataset);
  std::vector<fs::path> raw;
  for (const auto& f : files) raw.push_back(LocateRaw(f, options));

  csv::Table table;
  try {
    if (options.dataset == "adult") {
      table = PrepareAdult(raw);
    } else if (options.dataset == "german") {
      table = PrepareGerman(raw[0]);
    } else if (options.dataset == "compas") {
      table = PrepareCompas(raw[0]);
    } else {
      table = PrepareBank(raw[0]);
    }
  } catch (const Error& e) {
    throw Error("preparing " + options.dataset + ": " + e.what() +
                " (is the raw file complete and unmodified?)");
  }
  if (table.rows.empty()) {
    throw Error("preparing " + options.dataset + ": no rows survived filtering");
  }

  fs::create_directories(options.out_dir);
  PrepareResult result;
  result.csv_path = options.out_dir / (options.dataset + ".csv");
  result.config_path = options.out_dir / (options.dataset + ".config.json");
  result.rows = table.rows.size();
  csv::WriteFile(result.csv_path, table);
  std::ofstream cfg(result.config_path);
  if (!cfg) throw Error("cannot write " + result.config_path.string());
  cfg << DefaultBenchmarkConfig(options.dataset).dump(2) << '\n';
  if (!cfg) throw Error("write failed: " + result.config_path.string());
  return result;
}

void DownloadFile(const std::string& url, const fs::path& dest) {
  static const CURLcode init = curl_global_init(CURL_GLOBAL_DEFAULT);
  if (init != CURLE_OK) throw Error("libcurl initialization failed");
  const fs::path tmp = dest.string() + ".part";
  CURLcode rc;
  long status = 0;
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(),
                                                             &curl_easy_cleanup);
    if (!curl) throw Error("libcurl handle creation failed");
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_CONNECTTIMEOUT, 30L);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, &WriteCallback);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &out);
    rc = curl_easy_perform(curl.get());
    curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &status);
  }
  if (rc != CURLE_OK) {
    fs::remove(tmp);
    throw Error("download of " + url + " failed: " + curl_easy_strerror(rc) +
                (status ? " (HTTP " + std::to_string(status) + ")" : ""));
  }
  fs::rename(tmp, dest);
}

}  // namespace fairlabel
