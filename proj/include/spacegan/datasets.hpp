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

#ifndef SPACEGAN_DATASETS_HPP_
#define SPACEGAN_DATASETS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spacegan/geometry.hpp"
#include "spacegan/matrix.hpp"

namespace spacegan {

// n observations d_i = (x_i, y_i, c_i).
struct SpatialDataset {
  Coordinates coords;
  Matrix features;                       // n x m
  std::vector<double> target;            // n
  std::vector<std::string> feature_names;  // m

  std::size_t size() const { return target.size(); }
  std::size_t feature_count() const { return features.cols(); }

  // Throws on inconsistent sizes, m == 0 or non-finite values.
  void validate() const;
  SpatialDataset subset(std::span<const std::size_t> indices) const;
};

inline constexpr std::size_t kToy1Side = 20;
inline constexpr std::size_t kToy2Side = 29;

// 20x20 grid at 2.5, 7.5, ..., 97.5 (c1 varies fastest); x ~ N(0, 1);
// y = sin(x) + (c1 - c2)^2, then standardised (sample std).
SpatialDataset gen_toy1(std::uint64_t seed);

enum class Toy2Variant {
  // z ~ U(1.75, 99.75) * 0.01, so floor(z) is 0 and the trend term vanishes.
  literal,
  // z ~ U(1.75, 99.75); floor first, then scale by 0.01.
  floor_before_scale,
};

// 29x29 grid at 1.75, 5.25, ..., 99.75; x ~ N(0, 1);
// y = sin(c1 + c2) * 2 pi + floor(z) * 0.1 c1, then standardised.
// Draw order: all x, then all z.
SpatialDataset gen_toy2(std::uint64_t seed, Toy2Variant variant = Toy2Variant::literal);

// Kaggle California Housing CSV. Columns are located by header name (extra
// columns such as ocean_proximity are ignored); rows with any empty/NA
// required field are dropped. coords = (longitude, latitude), target =
// median_house_value.
SpatialDataset load_california(const std::filesystem::path& path);
SpatialDataset read_california(std::istream& in);

// Generic dataset CSV: header c1,c2,y,<feature names...>.
void write_dataset_csv(std::ostream& out, const SpatialDataset& data);
SpatialDataset read_dataset_csv(std::istream& in);
SpatialDataset load_dataset_csv(const std::filesystem::path& path);

struct ColumnSummary {
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};
std::vector<ColumnSummary> summarize(const SpatialDataset& data);

}  // namespace spacegan

#endif  // SPACEGAN_DATASETS_HPP_
