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

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "spacegan/error.hpp"
#include "spacegan/experiments.hpp"

namespace spacegan {
namespace {

RunConfig tiny(const std::string& dataset = "toy1") {
  RunConfig c = default_config(Profile::desk, dataset);
  c.tsteps = 20;
  c.snap = 10;
  c.samples_c = 2;
  c.ensemble_b = 2;
  c.batch = 8;
  c.generator_filters = c.discriminator_filters = 4;
  c.max_folds = 2;
  c.gp_max_train = 100;
  return c;
}

TEST(Config, Defaults) {
  const auto desk = default_config(Profile::desk, "toy1");
  EXPECT_EQ(desk.generator_filters, 50u);
  EXPECT_EQ(desk.max_points, 0u);
  const auto paper = default_config(Profile::paper, "california50");
  EXPECT_EQ(paper.tsteps, 20000u);
  EXPECT_EQ(paper.samples_c, 500u);
  EXPECT_EQ(paper.ensemble_b, 100u);
  EXPECT_EQ(paper.generator_filters, 200u);
  EXPECT_EQ(paper.noise_dim, 15u);
  EXPECT_EQ(paper.max_points, 0u);
  EXPECT_EQ(default_config(Profile::desk, "california15").max_points, 2000u);
  EXPECT_EQ(default_config(Profile::desk, "toy2").generator_filters, 100u);
  EXPECT_NO_THROW(desk.validate());
  EXPECT_EQ(profile_from_string(to_string(Profile::paper)), Profile::paper);
  EXPECT_THROW(profile_from_string("lab"), Error);
}

TEST(Config, JsonRoundTripAndUnknownKeys) {
  auto c = default_config(Profile::desk, "toy2");
  c.seed = 42;
  c.tree.max_depth = 7;
  const auto back = apply_json(RunConfig{}, to_json(c));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  EXPECT_THROW(apply_json(c, nlohmann::json{{"tsteps_typo", 3}}), Error);
  EXPECT_THROW(apply_json(c, nlohmann::json{{"metric", "mae"}}), Error);
}

TEST(Config, ValidateRejects) {
  auto c = tiny();
  c.dataset = "toy3";
  EXPECT_THROW(c.validate(), Error);
  c = tiny();
  c.ensemble_b = 0;
  EXPECT_THROW(c.validate(), Error);
  c = tiny();
  c.max_points = 100;
  EXPECT_THROW(c.validate(), Error);  // toys are fixed grids
  c = tiny();
  c.gp_lengthscale = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = tiny();
  c.snap = c.tsteps + 1;
  EXPECT_THROW(c.validate(), Error);
  c = default_config(Profile::desk, "california15");
  c.california_csv = "x.csv";
  c.neighbours = "queen:10x10";
  EXPECT_THROW(c.validate(), Error);
}

TEST(Config, GraphSpecs) {
  auto c = tiny();
  const auto d = load_dataset(c);
  EXPECT_EQ(build_graph(c, d).size(), 400u);
  c.neighbours = "knn:4";
  const auto g = build_graph(c, d);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.neighbors(i).size(), 4u);
  c.neighbours = "queen:10x10";
  EXPECT_THROW(build_graph(c, d), Error);
  c.neighbours = "rook:20x20";
  EXPECT_THROW(build_graph(c, d), Error);
  c.neighbours = "knn:x";
  EXPECT_THROW(build_graph(c, d), Error);
}

TEST(Summary, MeanAndStandardError) {
  const auto s = summarize_method("m", {1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.standard_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(summarize_method("m", {3.0}).standard_error, 0.0);
}

TEST(Seeds, FoldSeedsAreDistinct) {
  EXPECT_NE(fold_seed(0, 0, 1), fold_seed(0, 1, 1));
  EXPECT_NE(fold_seed(0, 0, 1), fold_seed(0, 0, 2));
  EXPECT_NE(fold_seed(0, 0, 1), fold_seed(1, 0, 1));
  EXPECT_EQ(fold_seed(5, 3, 2), fold_seed(5, 3, 2));
}

class TinyRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_ = new RunConfig(tiny());
    config_->oracle_echo = true;
    problem_ = new Problem(load_problem(*config_));
    models_ = new std::vector<TrainedSpaceGan>(train_folds(*problem_, *config_));
  }
  static void TearDownTestSuite() {
    delete models_;
    delete problem_;
    delete config_;
  }
  static RunConfig* config_;
  static Problem* problem_;
  static std::vector<TrainedSpaceGan>* models_;
};
RunConfig* TinyRun::config_ = nullptr;
Problem* TinyRun::problem_ = nullptr;
std::vector<TrainedSpaceGan>* TinyRun::models_ = nullptr;

TEST_F(TinyRun, FoldPrefix) {
  EXPECT_EQ(problem_->plan.folds.size(), 10u);
  EXPECT_EQ(fold_count(*problem_, *config_), 2u);
  EXPECT_EQ(models_->size(), 2u);
}

TEST_F(TinyRun, Experiment1WritesArtifacts) {
  const auto dir = std::filesystem::temp_directory_path() / "spacegan_test_e1";
  std::filesystem::remove_all(dir);
  const auto r = run_experiment1(*problem_, *config_, *models_, dir);
  EXPECT_EQ(r.method("echo").mean, 0.0);
  EXPECT_EQ(r.method("spacegan").per_fold.size(), 2u);
  EXPECT_GT(r.method("gp").mean, 0.0);
  EXPECT_THROW(r.method("nope"), Error);
  for (const char* f : {"metrics.json", "manifest.json", "folds.csv", "lisa_0.csv",
                        "samples_1.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "metrics.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["experiment"], 1);
  EXPECT_EQ(j["folds"].size(), 2u);
  std::filesystem::remove_all(dir);
}

TEST_F(TinyRun, Experiment2ReportsAllMethods) {
  const auto r = run_experiment2(*problem_, *config_, *models_);
  for (const char* m : {"spacegan_mie", "spacegan_rmse", "gp", "spatial_boot"}) {
    const auto& s = r.method(m);
    ASSERT_EQ(s.per_fold.size(), 2u) << m;
    for (double v : s.per_fold) EXPECT_TRUE(std::isfinite(v) && v > 0.0) << m;
  }
  const auto again = run_experiment2(*problem_, *config_, *models_);
  EXPECT_EQ(again.metrics.dump(), r.metrics.dump());
}

TEST_F(TinyRun, ManifestRecordsFolds) {
  const auto m = folds_manifest("experiment1", *config_, *models_);
  EXPECT_EQ(m["folds"].size(), 2u);
  EXPECT_EQ(m["status"], "complete");
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
}

}  // namespace
}  // namespace spacegan
