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

#ifndef SPACEGAN_SPATIAL_CV_HPP_
#define SPACEGAN_SPATIAL_CV_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "spacegan/geometry.hpp"

namespace spacegan {

enum class FoldRole { train, buffer, test };

struct Fold {
  std::size_t axis = 0;  // 0 -> c1, 1 -> c2
  std::size_t bin = 0;
  double lower = 0.0;    // bin edges; the last bin is closed above
  double upper = 0.0;
  std::vector<std::size_t> test;    // ascending
  std::vector<std::size_t> buffer;  // neighbours of test points, not in test
  std::vector<std::size_t> train;   // everything else

  std::vector<FoldRole> roles(std::size_t n) const;
};

struct FoldPlan {
  std::vector<Fold> folds;
  std::size_t n = 0;

  std::size_t size() const { return folds.size(); }
};

// Strip folds: each axis is cut into `bins_per_axis` equal-width bins over
// [min, max], giving 2 * bins_per_axis test sets. Every point is tested once
// per axis. Train excludes the test strip and its graph neighbourhood.
FoldPlan spatial_folds(std::span<const Point> coords, const NeighborhoodGraph& graph,
                       std::size_t bins_per_axis = 5);

// Throws invalid_argument if a fold has a train point inside a test
// neighbourhood, overlapping roles, or incomplete coverage.
void check_fold(const Fold& fold, const NeighborhoodGraph& graph);

// CSV rows: index,fold,role.
void write_folds_csv(std::ostream& out, const FoldPlan& plan);

const char* to_string(FoldRole role);

}  // namespace spacegan

#endif  // SPACEGAN_SPATIAL_CV_HPP_
