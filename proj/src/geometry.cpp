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

#include "spacegan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "spacegan/error.hpp"

namespace spacegan {

void validate_coordinates(std::span<const Point> coords) {
  if (coords.empty()) fail(Errc::invalid_dimension, "no coordinates");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!std::isfinite(coords[i].c1) || !std::isfinite(coords[i].c2)) {
      fail(Errc::invalid_argument, "non-finite coordinate at index " + std::to_string(i));
    }
  }
}

NeighborhoodGraph NeighborhoodGraph::from_lists(
    std::vector<std::vector<std::size_t>> lists, GraphKind kind, std::size_t k) {
  const std::size_t n = lists.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> seen = lists[i];
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      fail(Errc::invalid_argument, "duplicate neighbour in N_" + std::to_string(i));
    }
    for (std::size_t j : lists[i]) {
      if (j >= n) fail(Errc::invalid_argument, "neighbour index out of range");
      if (j == i) fail(Errc::invalid_argument, "self-neighbour at " + std::to_string(i));
    }
  }
  NeighborhoodGraph g;
  g.lists_ = std::move(lists);
  g.kind_ = kind;
  g.k_ = k;
  return g;
}

std::size_t NeighborhoodGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto& l : lists_) best = std::max(best, l.size());
  return best;
}

bool NeighborhoodGraph::contains(std::size_t i, std::size_t j) const {
  const auto& l = lists_[i];
  return std::find(l.begin(), l.end(), j) != l.end();
}

int WeightMatrix::operator()(std::size_t i, std::size_t j) const {
  const auto& r = rows_[i];
  return std::binary_search(r.begin(), r.end(), j) ? 1 : 0;
}

std::vector<std::vector<int>> WeightMatrix::to_dense() const {
  const std::size_t n = size();
  std::vector<std::vector<int>> dense(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : rows_[i]) dense[i][j] = 1;
  }
  return dense;
}

WeightMatrix WeightMatrix::from_dense(const std::vector<std::vector<int>>& dense) {
  std::vector<std::vector<std::size_t>> lists(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].size() != dense.size()) fail(Errc::shape_mismatch, "weight matrix not square");
    for (std::size_t j = 0; j < dense.size(); ++j) {
      if (dense[i][j] != 0 && dense[i][j] != 1) fail(Errc::invalid_argument, "weights must be binary");
      if (dense[i][j] == 1) lists[i].push_back(j);
    }
  }
  return to_weight_matrix(NeighborhoodGraph::from_lists(std::move(lists)));
}

NeighborhoodGraph queen_graph(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    fail(Errc::invalid_dimension, "queen grid needs rows >= 1 and cols >= 1");
  }
  std::vector<std::vector<std::size_t>> lists(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto& l = lists[r * cols + c];
      // Visiting offsets in (dr, dc) order yields row-major ascending indices.
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
          const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(rows) ||
              cc >= static_cast<std::ptrdiff_t>(cols)) {
            continue;
          }
          l.push_back(static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc));
        }
      }
    }
  }
  return NeighborhoodGraph::from_lists(std::move(lists), GraphKind::queen);
}

namespace {

std::vector<std::size_t> nearest_of(std::span<const Point> coords, std::size_t i,
                                    std::size_t k) {
  const std::size_t n = coords.size();
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double d1 = coords[i].c1 - coords[j].c1;
    const double d2 = coords[i].c2 - coords[j].c2;
    cand.emplace_back(d1 * d1 + d2 * d2, j);
  }
  // Pair ordering gives ascending distance, then ascending index.
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<std::size_t> out(k);
  for (std::size_t t = 0; t < k; ++t) out[t] = cand[t].second;
  return out;
}

}  // namespace

NeighborhoodGraph knn_graph(std::span<const Point> coords, std::size_t k, Exec exec) {
  validate_coordinates(coords);
  const std::size_t n = coords.size();
  if (k == 0 || k >= n) {
    fail(Errc::invalid_k, "k = " + std::to_string(k) + " must satisfy 1 <= k <= n-1 (n = " +
                              std::to_string(n) + ")");
  }
  std::vector<std::vector<std::size_t>> lists(n);
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      lists[static_cast<std::size_t>(i)] = nearest_of(coords, static_cast<std::size_t>(i), k);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) lists[i] = nearest_of(coords, i, k);
  }
  return NeighborhoodGraph::from_lists(std::move(lists), GraphKind::knn, k);
}

WeightMatrix to_weight_matrix(const NeighborhoodGraph& graph) {
  WeightMatrix w;
  w.rows_.resize(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto nb = graph.neighbors(i);
    if (nb.empty()) {
      fail(Errc::degenerate_input, "location " + std::to_string(i) + " has no neighbours");
    }
    w.rows_[i].assign(nb.begin(), nb.end());
    std::sort(w.rows_[i].begin(), w.rows_[i].end());
  }
  return w;
}

NeighborhoodGraph restrict_graph(const NeighborhoodGraph& graph,
                                 std::span<const Point> coords,
                                 std::span<const std::size_t> indices) {
  const std::size_t m = indices.size();
  if (graph.kind() == GraphKind::knn) {
    Coordinates sub(m);
    for (std::size_t t = 0; t < m; ++t) sub[t] = coords[indices[t]];
    return knn_graph(sub, std::min(graph.k(), m - 1));
  }
  std::vector<std::size_t> position(graph.size(), graph.size());
  for (std::size_t t = 0; t < m; ++t) position[indices[t]] = t;
  std::vector<std::vector<std::size_t>> lists(m);
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t j : graph.neighbors(indices[t])) {
      if (position[j] != graph.size()) lists[t].push_back(position[j]);
    }
  }
  return NeighborhoodGraph::from_lists(std::move(lists), graph.kind());
}

void write_graph_csv(std::ostream& out, const NeighborhoodGraph& graph) {
  out << "i,ordinal,j\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto nb = graph.neighbors(i);
    for (std::size_t t = 0; t < nb.size(); ++t) out << i << ',' << t << ',' << nb[t] << '\n';
  }
}

}  // namespace spacegan
