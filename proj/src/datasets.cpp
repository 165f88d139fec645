// Copyright 2026 The SpaceGAN Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spacegan/datasets.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "spacegan/error.hpp"
#include "spacegan/rng.hpp"
#include "spacegan/spatial_stats.hpp"

namespace spacegan {

void SpatialDataset::validate() const {
  const std::size_t n = target.size();
  if (coords.size() != n || features.rows() != n) {
    fail(Errc::shape_mismatch, "dataset fields disagree on n");
  }
  if (features.cols() == 0) fail(Errc::invalid_dimension, "dataset needs at least one feature");
  if (feature_names.size() != features.cols()) {
    fail(Errc::shape_mismatch, "feature name count does not match feature columns");
  }
  validate_coordinates(coords);
  for (double v : target) {
    if (!std::isfinite(v)) fail(Errc::invalid_argument, "non-finite target");
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) fail(Errc::invalid_argument, "non-finite feature");
  }
}

SpatialDataset SpatialDataset::subset(std::span<const std::size_t> indices) const {
  SpatialDataset out;
  out.features = features.select_rows(indices);
  out.feature_names = feature_names;
  out.coords.reserve(indices.size());
  out.target.reserve(indices.size());
  for (std::size_t i : indices) {
    out.coords.push_back(coords[i]);
    out.target.push_back(target[i]);
  }
  return out;
}

namespace {

// Toy targets are reported with mean 0 and standard deviation 1 under the
// sample (n - 1) convention, the same one that gives 28.868 for the Toy 1
// coordinate columns.
std::vector<double> standardize_sample(const std::vector<double>& raw) {
  const auto n = static_cast<double>(raw.size());
  double sum = 0.0;
  for (double v : raw) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : raw) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - mean) / sd;
  return out;
}

Coordinates regular_grid(std::size_t side, double origin, double step) {
  Coordinates coords;
  coords.reserve(side * side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      coords.push_back({origin + step * static_cast<double>(c),
                        origin + step * static_cast<double>(r)});
    }
  }
  return coords;
}

}  // namespace

SpatialDataset gen_toy1(std::uint64_t seed) {
  Rng rng(seed);
  SpatialDataset data;
  data.coords = regular_grid(kToy1Side, 2.5, 5.0);
  const std::size_t n = data.coords.size();
  data.features = Matrix(n, 1);
  data.feature_names = {"x1"};
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.normal();
    data.features(i, 0) = x;
    const double diff = data.coords[i].c1 - data.coords[i].c2;
    raw[i] = std::sin(x) + diff * diff;
  }
  data.target = standardize_sample(raw);
  return data;
}

SpatialDataset gen_toy2(std::uint64_t seed, Toy2Variant variant) {
  Rng rng(seed);
  SpatialDataset data;
  data.coords = regular_grid(kToy2Side, 1.75, 3.5);
  const std::size_t n = data.coords.size();
  data.features = Matrix(n, 1);
  data.feature_names = {"x1"};
  for (std::size_t i = 0; i < n; ++i) data.features(i, 0) = rng.normal();
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.uniform(1.75, 99.75);
    const double trend = variant == Toy2Variant::literal ? std::floor(z * 0.01)
                                                         : std::floor(z) * 0.01;
    const Point& p = data.coords[i];
    raw[i] = std::sin(p.c1 + p.c2) * 2.0 * std::numbers::pi + trend * 0.1 * p.c1;
  }
  data.target = standardize_sample(raw);
  return data;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& field) {
  const std::string t = trim(field);
  return t.empty() || t == "NA" || t == "NaN" || t == "nan";
}

double parse_number(const std::string& field, std::size_t line_no, const std::string& column) {
  const std::string t = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    fail(Errc::parse, "row " + std::to_string(line_no) + ", column " + column +
                          ": cannot parse '" + t + "'");
  }
  return value;
}

std::vector<std::size_t> locate_columns(const std::vector<std::string>& header,
                                        std::span<const std::string> wanted) {
  std::vector<std::size_t> pos;
  for (const auto& name : wanted) {
    const auto it = std::find_if(header.begin(), header.end(),
                                 [&](const std::string& h) { return trim(h) == name; });
    if (it == header.end()) fail(Errc::schema, "missing column '" + name + "'");
    pos.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  return pos;
}

}  // namespace

SpatialDataset read_california(std::istream& in) {
  static const std::array<std::string, 9> kColumns = {
      "longitude",  "latitude",   "housing_median_age", "total_rooms",       "total_bedrooms",
      "population", "households", "median_income",      "median_house_value"};
  std::string line;
  if (!std::getline(in, line)) fail(Errc::schema, "empty California Housing file");
  const auto pos = locate_columns(split_csv_line(line), kColumns);

  SpatialDataset data;
  data.feature_names.assign(kColumns.begin() + 2, kColumns.begin() + 8);
  std::vector<double> feature_values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    std::array<double, 9> row{};
    bool complete = true;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (pos[c] >= fields.size()) fail(Errc::parse, "row " + std::to_string(line_no) + " is short");
      if (is_missing(fields[pos[c]])) {
        complete = false;
        break;
      }
      row[c] = parse_number(fields[pos[c]], line_no, kColumns[c]);
    }
    if (!complete) continue;
    data.coords.push_back({row[0], row[1]});
    feature_values.insert(feature_values.end(), row.begin() + 2, row.begin() + 8);
    data.target.push_back(row[8]);
  }
  data.features = Matrix(data.target.size(), 6);
  data.features.data() = std::move(feature_values);
  data.validate();
  return data;
}

SpatialDataset load_california(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  return read_california(in);
}

void write_dataset_csv(std::ostream& out, const SpatialDataset& data) {
  out << "c1,c2,y";
  for (const auto& name : data.feature_names) out << ',' << name;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.coords[i].c1 << ',' << data.coords[i].c2 << ',' << data.target[i];
    for (double v : data.features.row(i)) out << ',' << v;
    out << '\n';
  }
}

SpatialDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(Errc::schema, "empty dataset file");
  const auto header = split_csv_line(line);
  static const std::array<std::string, 3> kFixed = {"c1", "c2", "y"};
  if (header.size() < 4) fail(Errc::schema, "dataset CSV needs c1,c2,y and at least one feature");
  for (std::size_t c = 0; c < 3; ++c) {
    if (trim(header[c]) != kFixed[c]) fail(Errc::schema, "expected column '" + kFixed[c] + "'");
  }
  SpatialDataset data;
  for (std::size_t c = 3; c < header.size(); ++c) data.feature_names.push_back(trim(header[c]));
  const std::size_t m = data.feature_names.size();
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      fail(Errc::parse, "row " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields");
    }
    const double c1 = parse_number(fields[0], line_no, "c1");
    const double c2 = parse_number(fields[1], line_no, "c2");
    data.coords.push_back({c1, c2});
    data.target.push_back(parse_number(fields[2], line_no, "y"));
    for (std::size_t c = 0; c < m; ++c) {
      values.push_back(parse_number(fields[3 + c], line_no, data.feature_names[c]));
    }
  }
  data.features = Matrix(data.target.size(), m);
  data.features.data() = std::move(values);
  data.validate();
  return data;
}

SpatialDataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  return read_dataset_csv(in);
}

std::vector<ColumnSummary> summarize(const SpatialDataset& data) {
  auto describe = [](std::string name, const std::vector<double>& v) {
    ColumnSummary s;
    s.name = std::move(name);
    s.count = v.size();
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.min = *lo;
    s.max = *hi;
    return s;
  };
  std::vector<double> c1, c2;
  for (const auto& p : data.coords) {
    c1.push_back(p.c1);
    c2.push_back(p.c2);
  }
  std::vector<ColumnSummary> out;
  out.push_back(describe("c1", c1));
  out.push_back(describe("c2", c2));
  out.push_back(describe("y", data.target));
  for (std::size_t c = 0; c < data.feature_count(); ++c) {
    out.push_back(describe(data.feature_names[c], data.features.column(c)));
  }
  return out;
}

}  // namespace spacegan
