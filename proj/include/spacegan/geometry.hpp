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

#ifndef SPACEGAN_GEOMETRY_HPP_
#define SPACEGAN_GEOMETRY_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "spacegan/exec.hpp"

namespace spacegan {

struct Point {
  double c1 = 0.0;
  double c2 = 0.0;
  bool operator==(const Point&) const = default;
};

// Planar coordinates, one point per spatial unit.
using Coordinates = std::vector<Point>;

void validate_coordinates(std::span<const Point> coords);

enum class GraphKind { queen, knn, custom };

// Ordered neighbour lists N_i over 0-based indices. Immutable once built.
//
// Neighbour order is canonical and is what the conditioning tensor layout
// follows: row-major ascending for queen grids, ascending distance (ties by
// ascending index) for kNN. kNN graphs are directed.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph() = default;

  // Validates: no self-loops, indices in range, no duplicates per list.
  static NeighborhoodGraph from_lists(std::vector<std::vector<std::size_t>> lists,
                                      GraphKind kind = GraphKind::custom,
                                      std::size_t k = 0);

  std::size_t size() const { return lists_.size(); }
  std::span<const std::size_t> neighbors(std::size_t i) const { return lists_[i]; }
  GraphKind kind() const { return kind_; }
  // Neighbour count for kNN graphs; 0 otherwise.
  std::size_t k() const { return k_; }
  // Largest |N_i|; the conditioning tensor's slot count.
  std::size_t max_degree() const;
  bool contains(std::size_t i, std::size_t j) const;

  bool operator==(const NeighborhoodGraph&) const = default;

 private:
  std::vector<std::vector<std::size_t>> lists_;
  GraphKind kind_ = GraphKind::custom;
  std::size_t k_ = 0;
};

// Binary spatial weights, w_ij = 1 iff j in N_i. Stored as sorted row
// supports, so n can be large without an n*n allocation.
class WeightMatrix {
 public:
  WeightMatrix() = default;

  std::size_t size() const { return rows_.size(); }
  int operator()(std::size_t i, std::size_t j) const;
  // Column indices of the ones in row i, ascending.
  std::span<const std::size_t> row(std::size_t i) const { return rows_[i]; }
  std::vector<std::vector<int>> to_dense() const;

  static WeightMatrix from_dense(const std::vector<std::vector<int>>& dense);

 private:
  friend WeightMatrix to_weight_matrix(const NeighborhoodGraph& graph);
  std::vector<std::vector<std::size_t>> rows_;
};

// 8-neighbour adjacency on a rows x cols grid, cells indexed row-major.
NeighborhoodGraph queen_graph(std::size_t rows, std::size_t cols);

// k nearest neighbours by Euclidean distance on the raw coordinates.
NeighborhoodGraph knn_graph(std::span<const Point> coords, std::size_t k,
                            Exec exec = Exec::parallel);

// Throws degenerate_input if any row ends up empty.
WeightMatrix to_weight_matrix(const NeighborhoodGraph& graph);

// Graph restricted to `indices` (re-indexed 0..m-1 in the given order).
// Queen/custom graphs keep only the surviving edges; kNN graphs are rebuilt
// on the subset coordinates with k clamped to m - 1 so every row stays full.
NeighborhoodGraph restrict_graph(const NeighborhoodGraph& graph,
                                 std::span<const Point> coords,
                                 std::span<const std::size_t> indices);

// CSV rows: i,ordinal,j (0-based).
void write_graph_csv(std::ostream& out, const NeighborhoodGraph& graph);

}  // namespace spacegan

#endif  // SPACEGAN_GEOMETRY_HPP_
