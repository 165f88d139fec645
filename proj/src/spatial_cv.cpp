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

#include "spacegan/spatial_cv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "spacegan/error.hpp"

namespace spacegan {

const char* to_string(FoldRole role) {
  switch (role) {
    case FoldRole::train: return "train";
    case FoldRole::buffer: return "buffer";
    case FoldRole::test: return "test";
  }
  return "?";
}

std::vector<FoldRole> Fold::roles(std::size_t n) const {
  std::vector<FoldRole> out(n, FoldRole::train);
  for (std::size_t i : buffer) out[i] = FoldRole::buffer;
  for (std::size_t i : test) out[i] = FoldRole::test;
  return out;
}

FoldPlan spatial_folds(std::span<const Point> coords, const NeighborhoodGraph& graph,
                       std::size_t bins_per_axis) {
  validate_coordinates(coords);
  const std::size_t n = coords.size();
  if (bins_per_axis == 0) fail(Errc::invalid_argument, "bins_per_axis must be positive");
  if (n < 2 * bins_per_axis) {
    fail(Errc::invalid_dimension, "need n >= 2 * bins_per_axis points");
  }
  if (graph.size() != n) fail(Errc::shape_mismatch, "graph and coordinates differ in size");

  FoldPlan plan;
  plan.n = n;
  for (std::size_t axis = 0; axis < 2; ++axis) {
    auto value = [&](std::size_t i) { return axis == 0 ? coords[i].c1 : coords[i].c2; };
    double lo = value(0), hi = value(0);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, value(i));
      hi = std::max(hi, value(i));
    }
    const double width = (hi - lo) / static_cast<double>(bins_per_axis);
    if (!(width > 0.0)) fail(Errc::empty_fold, "zero coordinate range on axis " + std::to_string(axis));

    std::vector<std::vector<std::size_t>> members(bins_per_axis);
    for (std::size_t i = 0; i < n; ++i) {
      auto bin = static_cast<std::size_t>(std::floor((value(i) - lo) / width));
      bin = std::min(bin, bins_per_axis - 1);
      members[bin].push_back(i);
    }
    for (std::size_t b = 0; b < bins_per_axis; ++b) {
      if (members[b].empty()) {
        fail(Errc::empty_fold, "axis " + std::to_string(axis) + " bin " + std::to_string(b) +
                                   " contains no points");
      }
      Fold fold;
      fold.axis = axis;
      fold.bin = b;
      fold.lower = lo + width * static_cast<double>(b);
      fold.upper = b + 1 == bins_per_axis ? hi : lo + width * static_cast<double>(b + 1);
      fold.test = std::move(members[b]);

      std::vector<char> role(n, 0);  // 0 train, 1 buffer, 2 test
      for (std::size_t j : fold.test) role[j] = 2;
      for (std::size_t j : fold.test) {
        for (std::size_t k : graph.neighbors(j)) {
          if (role[k] == 0) role[k] = 1;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (role[i] == 0) fold.train.push_back(i);
        if (role[i] == 1) fold.buffer.push_back(i);
      }
      plan.folds.push_back(std::move(fold));
    }
  }
  return plan;
}

void check_fold(const Fold& fold, const NeighborhoodGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<int> count(n, 0);
  for (const auto* set : {&fold.test, &fold.buffer, &fold.train}) {
    for (std::size_t i : *set) {
      if (i >= n) fail(Errc::invalid_argument, "fold index out of range");
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] != 1) {
      fail(Errc::invalid_argument, "index " + std::to_string(i) + " appears in " +
                                       std::to_string(count[i]) + " fold roles");
    }
  }
  const auto roles = fold.roles(n);
  for (std::size_t j : fold.test) {
    for (std::size_t k : graph.neighbors(j)) {
      if (roles[k] == FoldRole::train) {
        fail(Errc::invalid_argument, "train index " + std::to_string(k) +
                                         " neighbours test index " + std::to_string(j));
      }
    }
  }
}

void write_folds_csv(std::ostream& out, const FoldPlan& plan) {
  out << "index,fold,role\n";
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto roles = plan.folds[f].roles(plan.n);
    for (std::size_t i = 0; i < plan.n; ++i) out << i << ',' << f << ',' << to_string(roles[i]) << '\n';
  }
}

}  // namespace spacegan
