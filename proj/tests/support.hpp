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

// Independent reference implementations and random-case generators shared by
// the unit and acceptance tests. Nothing here calls into the library code it
// is used to check.

#ifndef SPACEGAN_TESTS_SUPPORT_HPP_
#define SPACEGAN_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "spacegan/geometry.hpp"
#include "spacegan/matrix.hpp"

namespace spacegan::testing {

// Test-side randomness uses the standard engine directly so generators stay
// independent of the library RNG.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Random binary weights with zero diagonal and at least one off-diagonal one
// per row.
inline std::vector<std::vector<int>> random_binary_w(Gen& g, std::size_t n, double density) {
  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && g.coin(density)) {
        w[i][j] = 1;
        any = true;
      }
    }
    if (!any) {
      std::size_t j = g.index(0, n - 2);
      if (j >= i) ++j;
      w[i][j] = 1;
    }
  }
  return w;
}

inline std::vector<double> random_nonconstant(Gen& g, std::size_t n) {
  std::vector<double> y(n);
  for (auto& v : y) v = g.uniform(-5.0, 5.0);
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) y[0] += 1.0;
  return y;
}

inline std::vector<std::vector<std::size_t>> dense_to_lists(const std::vector<std::vector<int>>& w) {
  std::vector<std::vector<std::size_t>> lists(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[i][j] != 0) lists[i].push_back(j);
    }
  }
  return lists;
}

// Local Moran's I written term by term from its definition over a dense w.
inline std::vector<double> lisa_oracle(const std::vector<double>& y,
                                       const std::vector<std::vector<int>>& w) {
  const std::size_t n = y.size();
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 0.0;
    double lag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      denom += (y[j] - ybar) * (y[j] - ybar);
      lag += w[i][j] * (y[j] - ybar);
    }
    out[i] = static_cast<double>(n - 1) * (y[i] - ybar) / denom * lag;
  }
  return out;
}

inline double mie_oracle(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<std::vector<int>>& w) {
  const auto ia = lisa_oracle(a, w);
  const auto ib = lisa_oracle(b, w);
  double s = 0.0;
  for (std::size_t i = 0; i < ia.size(); ++i) s += std::abs(ia[i] - ib[i]);
  return s;
}

// All-pairs kNN: sort every other point by (squared distance, index).
inline std::vector<std::vector<std::size_t>> knn_oracle(const std::vector<Point>& pts, std::size_t k) {
  std::vector<std::vector<std::size_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double dx = pts[i].c1 - pts[j].c1;
      const double dy = pts[i].c2 - pts[j].c2;
      cand.emplace_back(dx * dx + dy * dy, j);
    }
    std::sort(cand.begin(), cand.end());
    for (std::size_t t = 0; t < k; ++t) out[i].push_back(cand[t].second);
  }
  return out;
}

// Solves A x = b by Gauss-Jordan elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
  return b;
}

inline std::vector<std::vector<double>> dense_inverse(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const auto col = dense_solve(a, e);
    for (std::size_t r = 0; r < n; ++r) inv[r][c] = col[r];
  }
  return inv;
}

// CART by exhaustive enumeration: every feature, every midpoint between
// consecutive distinct values, SSE summed directly. Nodes in preorder.
struct OracleNode {
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  double value = 0.0;
};

class TreeOracle {
 public:
  TreeOracle(const Matrix& x, const std::vector<double>& y, std::size_t max_depth,
             std::size_t min_leaf)
      : x_(x), y_(y), max_depth_(max_depth), min_leaf_(std::max<std::size_t>(1, min_leaf)) {
    std::vector<std::size_t> rows(y.size());
    std::iota(rows.begin(), rows.end(), 0);
    grow(rows, 0);
  }
  const std::vector<OracleNode>& nodes() const { return nodes_; }

 private:
  static double sse(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double t : v) s += (t - m) * (t - m);
    return s;
  }

  std::size_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    std::vector<double> ys;
    for (auto r : rows) ys.push_back(y_[r]);
    nodes_[id].value = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    const double parent = sse(ys);
    if (depth >= max_depth_ || rows.size() < 2 * min_leaf_ || parent <= 0.0) return id;

    int best_f = -1;
    double best_t = 0.0;
    const double tie = 1e-10 * parent;
    double best = parent * (1.0 - 1e-12) + tie;
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::vector<double> values;
      for (auto r : rows) values.push_back(x_(r, f));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t v = 0; v + 1 < values.size(); ++v) {
        const double t = 0.5 * (values[v] + values[v + 1]);
        std::vector<double> l, r;
        for (auto row : rows) (x_(row, f) <= t ? l : r).push_back(y_[row]);
        if (l.size() < min_leaf_ || r.size() < min_leaf_) continue;
        const double s = sse(l) + sse(r);
        if (s < best - tie) {
          best = s;
          best_f = static_cast<int>(f);
          best_t = t;
        }
      }
    }
    if (best_f < 0) return id;
    std::vector<std::size_t> l, r;
    for (auto row : rows) (x_(row, static_cast<std::size_t>(best_f)) <= best_t ? l : r).push_back(row);
    nodes_[id].feature = best_f;
    nodes_[id].threshold = best_t;
    const std::size_t li = grow(l, depth + 1);
    const std::size_t ri = grow(r, depth + 1);
    nodes_[id].left = li;
    nodes_[id].right = ri;
    return id;
  }

  const Matrix& x_;
  const std::vector<double>& y_;
  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::vector<OracleNode> nodes_;
};

}  // namespace spacegan::testing

#endif  // SPACEGAN_TESTS_SUPPORT_HPP_
