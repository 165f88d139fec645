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

#ifndef SPACEGAN_EXPERIMENTS_HPP_
#define SPACEGAN_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spacegan/datasets.hpp"
#include "spacegan/ensemble.hpp"
#include "spacegan/geometry.hpp"
#include "spacegan/spacegan.hpp"
#include "spacegan/spatial_cv.hpp"

namespace spacegan {

enum class Profile { desk, paper };
const char* to_string(Profile profile);
Profile profile_from_string(const std::string& name);

// Everything a run depends on. Defaults come from the profile and the
// dataset (see default_config); a JSON config file and then explicit flags
// are layered on top.
struct RunConfig {
  std::string dataset = "toy1";  // toy1 | toy2 | california15 | california50 | csv:<path>
  std::string neighbours;        // queen:RxC | knn:K; empty = dataset default
  std::string california_csv;    // California Housing file for california15/50
  std::size_t max_points = 0;    // seeded row subsample before folding; 0 = all rows
  Profile profile = Profile::desk;
  std::uint64_t seed = 0;
  SelectionMetric metric = SelectionMetric::mie;
  std::size_t tsteps = 5000;
  std::size_t snap = 500;
  std::size_t samples_c = 25;
  std::size_t ensemble_b = 20;
  std::size_t bins = 5;
  std::size_t batch = 100;
  double learning_rate = 0.01;
  std::size_t noise_dim = 8;
  std::size_t generator_filters = 50;
  std::size_t discriminator_filters = 50;
  std::size_t gp_max_train = 2000;
  double gp_lengthscale = 1.0;
  TreeParams tree;
  std::size_t max_folds = 0;   // 0 = all folds; smaller values run a prefix
  bool oracle_echo = false;    // add an "echo" method that returns the real y
  std::string out;

  void validate() const;
};

// Profile defaults (desk: tsteps 5000, C 25, B 20, California cut to 2000
// rows; paper: 20000, 500, 100, all rows) and the per-dataset architecture
// (filters, noise dimension).
RunConfig default_config(Profile profile, const std::string& dataset);

nlohmann::ordered_json to_json(const RunConfig& config);
// Overlays the keys present in `j` onto `base`; unknown keys are rejected.
RunConfig apply_json(RunConfig base, const nlohmann::json& j);

TrainConfig train_config(const RunConfig& config, std::uint64_t seed);

struct Problem {
  SpatialDataset data;
  NeighborhoodGraph graph;
  FoldPlan plan;
};

SpatialDataset load_dataset(const RunConfig& config);
NeighborhoodGraph build_graph(const RunConfig& config, const SpatialDataset& data);
Problem load_problem(const RunConfig& config);

// Seeds for fold-level randomness, derived from the run seed.
std::uint64_t fold_seed(std::uint64_t run_seed, std::size_t fold, std::uint64_t purpose);

std::size_t fold_count(const Problem& problem, const RunConfig& config);

// One SpaceGAN per fold, trained on that fold's train split.
std::vector<TrainedSpaceGan> train_folds(const Problem& problem, const RunConfig& config);

struct MethodSummary {
  std::string name;
  std::vector<double> per_fold;
  double mean = 0.0;
  double standard_error = 0.0;  // sample std over folds / sqrt(folds)
};

MethodSummary summarize_method(std::string name, std::vector<double> per_fold);

struct ExperimentReport {
  std::vector<MethodSummary> methods;
  nlohmann::ordered_json metrics;   // metrics.json content
  nlohmann::ordered_json manifest;  // manifest.json content
  const MethodSummary& method(const std::string& name) const;
};

// Test-split MIE of SpaceGAN draws and of the GP smooth per fold. When `out`
// is non-empty writes metrics.json, manifest.json, folds.csv and per-fold
// lisa_<f>.csv / samples_<f>.csv.
ExperimentReport run_experiment1(const Problem& problem, const RunConfig& config,
                                 const std::vector<TrainedSpaceGan>& models,
                                 const std::filesystem::path& out = {});

// Test-split RMSE of the four ensembles per fold (SpaceGAN-MIE, SpaceGAN-RMSE,
// GP-bagging, Spatial Boot). Writes metrics.json, manifest.json, folds.csv
// and predictions_<f>.csv when `out` is non-empty.
ExperimentReport run_experiment2(const Problem& problem, const RunConfig& config,
                                 const std::vector<TrainedSpaceGan>& models,
                                 const std::filesystem::path& out = {});

// Snapshot curves and selections of every fold model.
nlohmann::ordered_json folds_manifest(const std::string& command, const RunConfig& config,
                                      const std::vector<TrainedSpaceGan>& models);

}  // namespace spacegan

#endif  // SPACEGAN_EXPERIMENTS_HPP_
