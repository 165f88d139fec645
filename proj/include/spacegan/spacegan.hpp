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

#ifndef SPACEGAN_SPACEGAN_HPP_
#define SPACEGAN_SPACEGAN_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spacegan/datasets.hpp"
#include "spacegan/exec.hpp"
#include "spacegan/geometry.hpp"
#include "spacegan/neural.hpp"
#include "spacegan/spatial_stats.hpp"

namespace spacegan {

enum class SelectionMetric { mie, rmse };
const char* to_string(SelectionMetric metric);
SelectionMetric metric_from_string(const std::string& name);

struct TrainConfig {
  std::size_t tsteps = 20000;
  std::size_t batch = 100;          // L
  std::size_t snap = 500;
  std::size_t samples = 500;        // C
  std::size_t noise_dim = 8;
  std::size_t generator_filters = 50;
  std::size_t discriminator_filters = 50;
  double learning_rate = 0.01;
  SelectionMetric metric = SelectionMetric::mie;
  std::uint64_t seed = 0;

  void validate() const;
};

// Everything needed to turn a dataset into network inputs and back.
//
// A point's context is a [slots, channels] block: one row per neighbour in
// canonical graph order holding its standardised (x_j..., y_j), zero rows
// past |N_i|. The generator sees each row with the noise vector appended;
// the discriminator sees each row with the candidate (x_i..., y_i) appended.
struct GanLayout {
  Scaler scaler;             // channels columns: features, then target
  std::size_t slots = 0;
  std::size_t channels = 0;  // m + 1
  std::size_t noise_dim = 0;

  std::size_t generator_input() const { return slots * (channels + noise_dim); }
  std::size_t discriminator_input() const { return slots * 2 * channels; }
};

GanLayout make_layout(const SpatialDataset& data, std::span<const std::size_t> fit_indices,
                      const NeighborhoodGraph& graph, std::size_t noise_dim);

// [slots, channels] context of point i.
Tensor build_context(std::size_t i, const SpatialDataset& data, const NeighborhoodGraph& graph,
                     const GanLayout& layout);

// [indices.size(), slots * channels], one flattened context per row.
Tensor build_contexts(const SpatialDataset& data, const NeighborhoodGraph& graph,
                      std::span<const std::size_t> indices, const GanLayout& layout);

// conv1d(kernel = slots) -> relu -> dense linear head of `channels` outputs.
Network make_generator(const GanLayout& layout, std::size_t filters, Rng& rng);
// conv1d(kernel = slots) -> tanh -> dense -> sigmoid.
Network make_discriminator(const GanLayout& layout, std::size_t filters, Rng& rng);

// One standardised (x_hat..., y_hat) row per context, noise drawn from `rng`
// point by point in row order.
Tensor generate(const Network& generator, const GanLayout& layout, const Tensor& contexts,
                Rng& rng);

struct Snapshot {
  std::size_t step = 0;
  Network generator;
  Network discriminator;
  std::optional<double> mie;
  std::optional<double> rmse;

  std::optional<double> metric(SelectionMetric which) const {
    return which == SelectionMetric::mie ? mie : rmse;
  }
};

struct TrainedSpaceGan {
  Network generator;
  Network discriminator;
  std::vector<Snapshot> snapshots;
  std::size_t selected = 0;
  SelectionMetric metric = SelectionMetric::mie;
  GanLayout layout;
  TrainConfig config;
  // Set when training stopped early; snapshots taken so far are kept.
  std::optional<std::string> fault;
};

// Index of the smallest metric, earliest on ties; unset entries skipped.
std::size_t select_snapshot(std::span<const std::optional<double>> metrics);

// Re-run selection over the stored snapshots with another metric.
TrainedSpaceGan reselect(TrainedSpaceGan model, SelectionMetric metric);

struct SnapshotEvaluation {
  double mie = 0.0;   // mean over draws of sum_i |I(y)_i - I(y_hat)_i|
  double rmse = 0.0;  // mean over draws, standardised units
  std::size_t resampled = 0;
};

// C draws over `indices`; draw c uses its own stream of `seed` so serial and
// parallel runs agree exactly. A degenerate (constant) draw is redrawn once
// from a fallback stream, then reported as degenerate_input.
SnapshotEvaluation evaluate_snapshot(const Network& generator, const GanLayout& layout,
                                     const SpatialDataset& data, const NeighborhoodGraph& graph,
                                     std::span<const std::size_t> indices, const WeightMatrix& w,
                                     std::size_t draws, std::uint64_t seed,
                                     Exec exec = Exec::parallel);

// Alternating discriminator / generator ascent on the conditional GAN
// objective, a snapshot every `snap` steps scored on the training split, and
// the argmin snapshot under config.metric returned as the model.
TrainedSpaceGan train(const SpatialDataset& data, std::span<const std::size_t> train_indices,
                      const NeighborhoodGraph& graph, const TrainConfig& config,
                      Exec exec = Exec::parallel);

// Generated values in raw units, aligned with the requested indices.
struct GeneratedSample {
  std::vector<double> target;
  Matrix features;
};

std::vector<GeneratedSample> sample(const TrainedSpaceGan& model, const SpatialDataset& data,
                                    const NeighborhoodGraph& graph,
                                    std::span<const std::size_t> indices, std::size_t count,
                                    std::uint64_t seed, Exec exec = Exec::parallel);

// CSV columns: draw,index,c1,c2,y_hat,x_hat1..x_hatm.
void write_samples_csv(std::ostream& out, std::span<const GeneratedSample> samples,
                       std::span<const std::size_t> indices, std::span<const Point> coords);

// 64-bit FNV-1a over the text; used for manifest config hashes.
std::uint64_t fnv1a(const std::string& text);

// Writes step_<k>_generator.net / step_<k>_discriminator.net per snapshot and
// manifest.json listing step, mie, rmse, file names, the selected step and
// the config hash.
void write_checkpoints(const TrainedSpaceGan& model, const std::filesystem::path& directory,
                       const std::string& config_text);

}  // namespace spacegan

#endif  // SPACEGAN_SPACEGAN_HPP_
