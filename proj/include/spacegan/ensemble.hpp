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

#ifndef SPACEGAN_ENSEMBLE_HPP_
#define SPACEGAN_ENSEMBLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spacegan/datasets.hpp"
#include "spacegan/exec.hpp"
#include "spacegan/geometry.hpp"
#include "spacegan/gp.hpp"
#include "spacegan/matrix.hpp"
#include "spacegan/spacegan.hpp"

namespace spacegan {

struct TreeParams {
  std::size_t max_depth = 12;
  std::size_t min_samples_leaf = 2;
};

// CART regression tree. Splits minimise the summed squared error of the two
// children; candidate thresholds are midpoints between consecutive distinct
// values; x <= threshold goes left. Ties keep the lowest feature index and
// then the lowest threshold. A node splits only when that strictly reduces
// its squared error.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    double value = 0.0;  // mean training target of the node

    bool operator==(const Node&) const = default;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t feature_count() const { return features_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  double predict_row(std::span<const double> x) const;

  static RegressionTree from_nodes(std::vector<Node> nodes, std::size_t feature_count);

  bool operator==(const RegressionTree&) const = default;

 private:
  friend RegressionTree tree_fit(const Matrix& x, std::span<const double> y,
                                 const TreeParams& params);
  std::vector<Node> nodes_;
  std::size_t features_ = 0;
};

RegressionTree tree_fit(const Matrix& x, std::span<const double> y, const TreeParams& params = {});
std::vector<double> tree_predict(const RegressionTree& tree, const Matrix& x);

enum class EnsembleKind { ganning, gp_bag, spatial_boot };
const char* to_string(EnsembleKind kind);

struct Ensemble {
  EnsembleKind kind = EnsembleKind::ganning;
  std::vector<RegressionTree> members;
  std::size_t feature_count = 0;
};

// Unweighted mean of member predictions.
std::vector<double> ensemble_predict(const Ensemble& ensemble, const Matrix& x,
                                     Exec exec = Exec::parallel);

// Base-learner inputs: features x_i followed by c1, c2.
Matrix design_matrix(const SpatialDataset& data, std::span<const std::size_t> indices);

// Member b is fitted on the real design rows of `indices` against
// generated targets from draw b of `model` (streams of `seed`).
Ensemble ganning(const TrainedSpaceGan& model, const SpatialDataset& data,
                 const NeighborhoodGraph& graph, std::span<const std::size_t> indices,
                 std::size_t members, std::uint64_t seed, const TreeParams& params = {},
                 Exec exec = Exec::parallel);

// Member b is fitted on `design` against posterior draw b at `gp_query`,
// mapped back to raw units by `target_scaler`.
Ensemble gp_bagging(const GpModel& gp, const Matrix& gp_query, const Scaler& target_scaler,
                    const Matrix& design, std::size_t members, std::uint64_t seed,
                    const TreeParams& params = {}, Exec exec = Exec::parallel);

// Neighbourhood-block bootstrap over `indices`: append a uniformly drawn
// point and its neighbours (those inside `indices`, canonical order) until at
// least |indices| rows are collected, truncate, fit.
// `local` is the graph restricted to the resampled index set; the returned
// positions index into that set.
std::vector<std::size_t> block_bootstrap_rows(const NeighborhoodGraph& local, Rng& rng);
Ensemble spatial_bootstrap(const SpatialDataset& data, const NeighborhoodGraph& graph,
                           std::span<const std::size_t> indices, std::size_t members,
                           std::uint64_t seed, const TreeParams& params = {},
                           Exec exec = Exec::parallel);

// Versioned text format: header, kind, feature count, member count, then per
// tree its node count and one "feature threshold left right value" line per
// node.
void save_ensemble(std::ostream& out, const Ensemble& ensemble);
Ensemble load_ensemble(std::istream& in);

}  // namespace spacegan

#endif  // SPACEGAN_ENSEMBLE_HPP_
