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

#include "spacegan/ensemble.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include "spacegan/error.hpp"
#include "spacegan/rng.hpp"

namespace spacegan {

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const TreeParams& params)
      : x_(x), y_(y), params_(params) {}

  std::vector<RegressionTree::Node> build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    const std::size_t n = rows.size();
    double mean = 0.0;
    for (std::size_t r : rows) mean += y_[r];
    mean /= static_cast<double>(n);
    nodes_[id].value = mean;
    double parent_sse = 0.0;
    for (std::size_t r : rows) parent_sse += (y_[r] - mean) * (y_[r] - mean);

    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    if (depth >= params_.max_depth || n < 2 * min_leaf || parent_sse <= 0.0) return id;

    int best_feature = -1;
    double best_threshold = 0.0;
    // A later candidate must beat the incumbent by more than rounding noise,
    // so equal splits resolve to the lowest feature and threshold.
    const double tie = 1e-10 * parent_sse;
    double best_sse = parent_sse * (1.0 - 1e-12) + tie;
    std::vector<std::size_t> order = rows;
    std::vector<double> prefix(n + 1), prefix_sq(n + 1);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
      for (std::size_t t = 0; t < n; ++t) {
        const double d = y_[order[t]] - mean;
        prefix[t + 1] = prefix[t] + d;
        prefix_sq[t + 1] = prefix_sq[t] + d * d;
      }
      for (std::size_t p = min_leaf; p + min_leaf <= n; ++p) {
        const double lo = x_(order[p - 1], f);
        const double hi = x_(order[p], f);
        if (!(lo < hi)) continue;
        const auto nl = static_cast<double>(p);
        const auto nr = static_cast<double>(n - p);
        const double sl = prefix[p];
        const double sr = prefix[n] - prefix[p];
        const double sse = (prefix_sq[p] - sl * sl / nl) + (prefix_sq[n] - prefix_sq[p] - sr * sr / nr);
        if (sse < best_sse - tie) {
          best_sse = sse;
          best_feature = static_cast<int>(f);
          double mid = 0.5 * (lo + hi);
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x_(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const Matrix& x_;
  std::span<const double> y_;
  TreeParams params_;
  std::vector<RegressionTree::Node> nodes_;
};

}  // namespace

RegressionTree tree_fit(const Matrix& x, std::span<const double> y, const TreeParams& params) {
  if (x.rows() != y.size()) fail(Errc::shape_mismatch, "tree: X and y differ in rows");
  if (y.empty()) fail(Errc::invalid_dimension, "tree: no training rows");
  if (x.cols() == 0) fail(Errc::invalid_dimension, "tree: no features");
  std::vector<std::size_t> rows(y.size());
  std::iota(rows.begin(), rows.end(), 0);
  RegressionTree tree;
  tree.features_ = x.cols();
  tree.nodes_ = TreeBuilder(x, y, params).build(std::move(rows));
  return tree;
}

double RegressionTree::predict_row(std::span<const double> x) const {
  if (x.size() != features_) fail(Errc::shape_mismatch, "tree: feature dimension mismatch");
  std::size_t k = 0;
  while (nodes_[k].feature >= 0) {
    const auto& node = nodes_[k];
    k = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[k].value;
}

std::size_t RegressionTree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    const auto [k, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[k].feature >= 0) {
      stack.emplace_back(nodes_[k].left, d + 1);
      stack.emplace_back(nodes_[k].right, d + 1);
    }
  }
  return best;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const Node& n) { return n.feature < 0; }));
}

RegressionTree RegressionTree::from_nodes(std::vector<Node> nodes, std::size_t feature_count) {
  if (nodes.empty()) fail(Errc::invalid_argument, "tree needs at least one node");
  for (const auto& n : nodes) {
    if (n.feature >= 0 && (static_cast<std::size_t>(n.feature) >= feature_count ||
                           n.left >= nodes.size() || n.right >= nodes.size())) {
      fail(Errc::invalid_argument, "tree node references out of range");
    }
  }
  RegressionTree t;
  t.nodes_ = std::move(nodes);
  t.features_ = feature_count;
  return t;
}

std::vector<double> tree_predict(const RegressionTree& tree, const Matrix& x) {
  if (x.rows() > 0 && x.cols() != tree.feature_count()) {
    fail(Errc::shape_mismatch, "tree: feature dimension mismatch");
  }
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = tree.predict_row(x.row(r));
  return out;
}

const char* to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::ganning: return "ganning";
    case EnsembleKind::gp_bag: return "gp_bag";
    case EnsembleKind::spatial_boot: return "spatial_boot";
  }
  return "?";
}

std::vector<double> ensemble_predict(const Ensemble& ensemble, const Matrix& x, Exec exec) {
  if (ensemble.members.empty()) fail(Errc::invalid_argument, "empty ensemble");
  if (x.rows() > 0 && x.cols() != ensemble.feature_count) {
    fail(Errc::shape_mismatch, "ensemble: feature dimension mismatch");
  }
  const auto b = static_cast<double>(ensemble.members.size());
  std::vector<double> out(x.rows());
  auto one = [&](std::size_t r) {
    double acc = 0.0;
    for (const auto& tree : ensemble.members) acc += tree.predict_row(x.row(r));
    out[r] = acc / b;
  };
  if (exec == Exec::parallel) {
    const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r) one(static_cast<std::size_t>(r));
  } else {
    for (std::size_t r = 0; r < x.rows(); ++r) one(r);
  }
  return out;
}

Matrix design_matrix(const SpatialDataset& data, std::span<const std::size_t> indices) {
  const std::size_t m = data.feature_count();
  Matrix out(indices.size(), m + 2);
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const std::size_t i = indices[t];
    for (std::size_t c = 0; c < m; ++c) out(t, c) = data.features(i, c);
    out(t, m) = data.coords[i].c1;
    out(t, m + 1) = data.coords[i].c2;
  }
  return out;
}

namespace {

// Fits member b from `make_member(b)` -> (design, targets), in parallel or
// serially; member order is fixed by b either way.
template <typename MakeMember>
std::vector<RegressionTree> fit_members(std::size_t members, const TreeParams& params, Exec exec,
                                        MakeMember make_member) {
  if (members == 0) fail(Errc::invalid_argument, "ensemble needs B >= 1");
  std::vector<RegressionTree> out(members);
  if (exec == Exec::parallel) {
    const auto n = static_cast<std::ptrdiff_t>(members);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < n; ++b) {
      const auto [x, y] = make_member(static_cast<std::size_t>(b));
      out[static_cast<std::size_t>(b)] = tree_fit(x, y, params);
    }
  } else {
    for (std::size_t b = 0; b < members; ++b) {
      const auto [x, y] = make_member(b);
      out[b] = tree_fit(x, y, params);
    }
  }
  return out;
}

}  // namespace

Ensemble ganning(const TrainedSpaceGan& model, const SpatialDataset& data,
                 const NeighborhoodGraph& graph, std::span<const std::size_t> indices,
                 std::size_t members, std::uint64_t seed, const TreeParams& params, Exec exec) {
  if (members == 0) fail(Errc::invalid_argument, "ensemble needs B >= 1");
  const auto draws = sample(model, data, graph, indices, members, seed, exec);
  const Matrix design = design_matrix(data, indices);
  Ensemble e;
  e.kind = EnsembleKind::ganning;
  e.feature_count = design.cols();
  e.members = fit_members(members, params, exec, [&](std::size_t b) {
    return std::pair<const Matrix&, const std::vector<double>&>(design, draws[b].target);
  });
  return e;
}

Ensemble gp_bagging(const GpModel& gp, const Matrix& gp_query, const Scaler& target_scaler,
                    const Matrix& design, std::size_t members, std::uint64_t seed,
                    const TreeParams& params, Exec exec) {
  if (gp_query.rows() != design.rows()) {
    fail(Errc::shape_mismatch, "GP query rows must align with design rows");
  }
  if (members == 0) fail(Errc::invalid_argument, "ensemble needs B >= 1");
  auto draws = gp_sample_posterior(gp, gp_query, members, seed);
  for (auto& d : draws) d = scaler_inverse(d, target_scaler);
  Ensemble e;
  e.kind = EnsembleKind::gp_bag;
  e.feature_count = design.cols();
  e.members = fit_members(members, params, exec, [&](std::size_t b) {
    return std::pair<const Matrix&, const std::vector<double>&>(design, draws[b]);
  });
  return e;
}

std::vector<std::size_t> block_bootstrap_rows(const NeighborhoodGraph& local, Rng& rng) {
  const std::size_t n = local.size();
  if (n == 0) fail(Errc::invalid_dimension, "bootstrap over an empty set");
  std::vector<std::size_t> rows;
  rows.reserve(n + local.max_degree() + 1);
  while (rows.size() < n) {
    const std::size_t seed_point = rng.index(n);
    rows.push_back(seed_point);
    const auto nb = local.neighbors(seed_point);
    rows.insert(rows.end(), nb.begin(), nb.end());
  }
  rows.resize(n);
  return rows;
}

Ensemble spatial_bootstrap(const SpatialDataset& data, const NeighborhoodGraph& graph,
                           std::span<const std::size_t> indices, std::size_t members,
                           std::uint64_t seed, const TreeParams& params, Exec exec) {
  if (indices.empty()) fail(Errc::invalid_dimension, "bootstrap over an empty set");
  const NeighborhoodGraph local =
      indices.size() > 1 ? restrict_graph(graph, data.coords, indices)
                         : NeighborhoodGraph::from_lists({{}});
  const Matrix design = design_matrix(data, indices);
  Ensemble e;
  e.kind = EnsembleKind::spatial_boot;
  e.feature_count = design.cols();
  e.members = fit_members(members, params, exec, [&](std::size_t b) {
    Rng rng = Rng::stream(seed, b);
    const auto rows = block_bootstrap_rows(local, rng);
    std::vector<double> y(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) y[t] = data.target[indices[rows[t]]];
    return std::pair<Matrix, std::vector<double>>(design.select_rows(rows), std::move(y));
  });
  return e;
}

namespace {
constexpr const char* kEnsembleMagic = "spacegan-ensemble";
constexpr int kEnsembleVersion = 1;
}  // namespace

void save_ensemble(std::ostream& out, const Ensemble& ensemble) {
  const auto old = out.precision(17);
  out << kEnsembleMagic << ' ' << kEnsembleVersion << '\n'
      << "kind " << to_string(ensemble.kind) << '\n'
      << "features " << ensemble.feature_count << '\n'
      << "members " << ensemble.members.size() << '\n';
  for (const auto& tree : ensemble.members) {
    out << "tree " << tree.nodes().size() << '\n';
    for (const auto& n : tree.nodes()) {
      out << n.feature << ' ' << n.threshold << ' ' << n.left << ' ' << n.right << ' ' << n.value
          << '\n';
    }
  }
  out.precision(old);
}

Ensemble load_ensemble(std::istream& in) {
  std::string magic, tag, kind;
  int version = 0;
  if (!(in >> magic >> version) || magic != kEnsembleMagic) fail(Errc::parse, "not an ensemble file");
  if (version != kEnsembleVersion) fail(Errc::parse, "unsupported ensemble version");
  Ensemble e;
  std::size_t count = 0;
  if (!(in >> tag >> kind) || tag != "kind") fail(Errc::parse, "ensemble: missing kind");
  if (kind == "ganning") e.kind = EnsembleKind::ganning;
  else if (kind == "gp_bag") e.kind = EnsembleKind::gp_bag;
  else if (kind == "spatial_boot") e.kind = EnsembleKind::spatial_boot;
  else fail(Errc::parse, "ensemble: unknown kind '" + kind + "'");
  if (!(in >> tag >> e.feature_count) || tag != "features") fail(Errc::parse, "ensemble: features");
  if (!(in >> tag >> count) || tag != "members") fail(Errc::parse, "ensemble: members");
  for (std::size_t b = 0; b < count; ++b) {
    std::size_t nodes = 0;
    if (!(in >> tag >> nodes) || tag != "tree") fail(Errc::parse, "ensemble: tree header");
    std::vector<RegressionTree::Node> list(nodes);
    for (auto& n : list) {
      if (!(in >> n.feature >> n.threshold >> n.left >> n.right >> n.value)) {
        fail(Errc::parse, "ensemble: truncated node list");
      }
    }
    e.members.push_back(RegressionTree::from_nodes(std::move(list), e.feature_count));
  }
  return e;
}

}  // namespace spacegan
