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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "spacegan/datasets.hpp"
#include "spacegan/error.hpp"
#include "spacegan/spatial_cv.hpp"
#include "support.hpp"

namespace spacegan {
namespace {

void expect_fold_invariants(const FoldPlan& plan, const NeighborhoodGraph& graph) {
  const std::size_t n = plan.n;
  std::vector<int> tested(n, 0);
  for (const auto& fold : plan.folds) {
    ASSERT_FALSE(fold.test.empty());
    std::vector<int> seen(n, 0);
    for (auto i : fold.test) ++seen[i];
    for (auto i : fold.buffer) ++seen[i];
    for (auto i : fold.train) ++seen[i];
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(seen[i], 1) << "index " << i;
    const std::set<std::size_t> train(fold.train.begin(), fold.train.end());
    for (auto j : fold.test) {
      ++tested[j];
      for (auto k : graph.neighbors(j)) ASSERT_FALSE(train.count(k)) << "leak " << j << "->" << k;
    }
    EXPECT_NO_THROW(check_fold(fold, graph));
  }
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(tested[i], 2) << "index " << i;
}

TEST(SpatialFolds, Toy1Strips) {
  const auto d = gen_toy1(0);
  const auto graph = queen_graph(20, 20);
  const auto plan = spatial_folds(d.coords, graph);
  ASSERT_EQ(plan.size(), 10u);
  for (std::size_t f = 0; f < 10; ++f) {
    const auto& fold = plan.folds[f];
    EXPECT_EQ(fold.axis, f / 5);
    EXPECT_EQ(fold.bin, f % 5);
    EXPECT_EQ(fold.test.size(), 80u);
    EXPECT_TRUE(std::is_sorted(fold.test.begin(), fold.test.end()));
  }
  expect_fold_invariants(plan, graph);
}

TEST(SpatialFolds, Toy1BufferIsOneGridLineEachSide) {
  const auto d = gen_toy1(0);
  const auto plan = spatial_folds(d.coords, queen_graph(20, 20));
  EXPECT_EQ(plan.folds[0].buffer.size(), 20u);  // edge strip: one neighbour line
  EXPECT_EQ(plan.folds[2].buffer.size(), 40u);  // interior strip: two lines
  EXPECT_EQ(plan.folds[2].train.size(), 280u);
}

TEST(SpatialFolds, AxisFoldsPartitionThePoints) {
  const auto d = gen_toy2(0);
  const auto plan = spatial_folds(d.coords, queen_graph(29, 29));
  for (std::size_t axis = 0; axis < 2; ++axis) {
    std::vector<int> count(d.size(), 0);
    for (std::size_t b = 0; b < 5; ++b) {
      for (auto i : plan.folds[axis * 5 + b].test) ++count[i];
    }
    for (int c : count) EXPECT_EQ(c, 1);
  }
}

TEST(SpatialFolds, RandomKnnInvariants) {
  testing::Gen g(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = g.index(60, 300);
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {g.uniform(0, 100), g.uniform(0, 100)};
    const auto graph = knn_graph(pts, g.index(1, 6));
    const std::size_t bins = g.index(2, 4);
    FoldPlan plan;
    try {
      plan = spatial_folds(pts, graph, bins);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::empty_fold);
      continue;
    }
    ASSERT_EQ(plan.size(), 2 * bins);
    expect_fold_invariants(plan, graph);
  }
}

TEST(SpatialFolds, LastBinClosedAbove) {
  const std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  const auto graph = knn_graph(pts, 1);
  const auto plan = spatial_folds(pts, graph, 2);
  EXPECT_EQ(plan.folds[0].test, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(plan.folds[1].test, (std::vector<std::size_t>{3, 4, 5}));
}

TEST(SpatialFolds, EmptyBinNamesTheBin) {
  const std::vector<Point> pts{{0, 0}, {0.1, 0}, {0.2, 0}, {9.8, 0}, {9.9, 0}, {10, 0}};
  try {
    spatial_folds(pts, knn_graph(pts, 1), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_fold);
    EXPECT_NE(std::string(e.what()).find("bin 1"), std::string::npos) << e.what();
  }
}

TEST(SpatialFolds, TooFewPoints) {
  const std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}};
  EXPECT_THROW(spatial_folds(pts, knn_graph(pts, 1), 2), Error);
}

TEST(CheckFold, DetectsLeak) {
  const auto graph = queen_graph(1, 4);
  Fold fold;
  fold.test = {0};
  fold.train = {1, 2, 3};  // 1 neighbours the test point
  EXPECT_THROW(check_fold(fold, graph), Error);
  fold.train = {2, 3};
  fold.buffer = {1};
  EXPECT_NO_THROW(check_fold(fold, graph));
  fold.buffer = {1, 2};  // overlap with train
  EXPECT_THROW(check_fold(fold, graph), Error);
}

TEST(FoldsCsv, OneRowPerPointAndFold) {
  const auto d = gen_toy1(0);
  const auto plan = spatial_folds(d.coords, queen_graph(20, 20));
  std::ostringstream out;
  write_folds_csv(out, plan);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "index,fold,role");
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), 1 + 10 * 400u);
  EXPECT_NE(s.find("\n0,0,test\n"), std::string::npos);
}

}  // namespace
}  // namespace spacegan
