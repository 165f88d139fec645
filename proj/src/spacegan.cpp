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

#include "spacegan/spacegan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spacegan/error.hpp"

namespace spacegan {

namespace {

constexpr double kLogEps = 1e-8;

// Stream ids; draw streams use the draw index directly.
constexpr std::uint64_t kGeneratorInitStream = 1;
constexpr std::uint64_t kDiscriminatorInitStream = 2;
constexpr std::uint64_t kTrainingStream = 3;
constexpr std::uint64_t kRedrawSalt = 0x7265647261770000ULL;

}  // namespace

const char* to_string(SelectionMetric metric) {
  return metric == SelectionMetric::mie ? "mie" : "rmse";
}

SelectionMetric metric_from_string(const std::string& name) {
  if (name == "mie") return SelectionMetric::mie;
  if (name == "rmse") return SelectionMetric::rmse;
  fail(Errc::invalid_argument, "unknown selection metric '" + name + "'");
}

void TrainConfig::validate() const {
  if (tsteps == 0) fail(Errc::invalid_argument, "tsteps must be positive");
  if (snap == 0 || snap > tsteps) fail(Errc::invalid_argument, "snap must be in [1, tsteps]");
  if (samples == 0) fail(Errc::invalid_argument, "C (samples) must be >= 1");
  if (batch == 0) fail(Errc::invalid_argument, "batch size L must be >= 1");
  if (noise_dim == 0) fail(Errc::invalid_argument, "noise_dim must be >= 1");
  if (generator_filters == 0 || discriminator_filters == 0) {
    fail(Errc::invalid_argument, "filter counts must be >= 1");
  }
  if (!(learning_rate > 0.0)) fail(Errc::invalid_argument, "learning rate must be positive");
}

GanLayout make_layout(const SpatialDataset& data, std::span<const std::size_t> fit_indices,
                      const NeighborhoodGraph& graph, std::size_t noise_dim) {
  if (graph.size() != data.size()) fail(Errc::shape_mismatch, "graph and dataset differ in size");
  const std::size_t m = data.feature_count();
  Matrix joint(fit_indices.size(), m + 1);
  for (std::size_t t = 0; t < fit_indices.size(); ++t) {
    const std::size_t i = fit_indices[t];
    for (std::size_t c = 0; c < m; ++c) joint(t, c) = data.features(i, c);
    joint(t, m) = data.target[i];
  }
  GanLayout layout;
  layout.scaler = scaler_fit(joint);
  for (std::size_t c = 0; c <= m; ++c) {
    if (!(layout.scaler.std[c] > 0.0)) {
      fail(c == m ? Errc::degenerate_input : Errc::degenerate_column,
           "training column " + std::to_string(c) + " is constant");
    }
  }
  layout.slots = graph.max_degree();
  if (layout.slots == 0) fail(Errc::invalid_argument, "graph has no edges");
  layout.channels = m + 1;
  layout.noise_dim = noise_dim;
  return layout;
}

namespace {

void fill_context(double* dst, std::size_t i, const SpatialDataset& data,
                  const NeighborhoodGraph& graph, const GanLayout& layout) {
  const std::size_t m = layout.channels - 1;
  const auto nb = graph.neighbors(i);
  const std::size_t used = std::min(nb.size(), layout.slots);
  std::fill(dst, dst + layout.slots * layout.channels, 0.0);
  for (std::size_t s = 0; s < used; ++s) {
    const std::size_t j = nb[s];
    double* row = dst + s * layout.channels;
    for (std::size_t c = 0; c < m; ++c) row[c] = layout.scaler.transform(data.features(j, c), c);
    row[m] = layout.scaler.transform(data.target[j], m);
  }
}

// Broadcast `extra` (width e) onto every context row: [slots, channels + e].
void append_to_rows(const double* context, const double* extra, std::size_t e,
                    const GanLayout& layout, double* dst) {
  for (std::size_t s = 0; s < layout.slots; ++s) {
    const double* src = context + s * layout.channels;
    std::copy(src, src + layout.channels, dst);
    std::copy(extra, extra + e, dst + layout.channels);
    dst += layout.channels + e;
  }
}

std::vector<double> standardized_target(const SpatialDataset& data,
                                        std::span<const std::size_t> indices,
                                        const GanLayout& layout) {
  const std::size_t m = layout.channels - 1;
  std::vector<double> y(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    y[t] = layout.scaler.transform(data.target[indices[t]], m);
  }
  return y;
}

}  // namespace

Tensor build_context(std::size_t i, const SpatialDataset& data, const NeighborhoodGraph& graph,
                     const GanLayout& layout) {
  if (i >= data.size() || i >= graph.size()) {
    fail(Errc::invalid_argument, "context index " + std::to_string(i) + " out of range");
  }
  Tensor out({layout.slots, layout.channels});
  fill_context(out.data.data(), i, data, graph, layout);
  return out;
}

Tensor build_contexts(const SpatialDataset& data, const NeighborhoodGraph& graph,
                      std::span<const std::size_t> indices, const GanLayout& layout) {
  const std::size_t width = layout.slots * layout.channels;
  Tensor out({indices.size(), width});
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= data.size()) fail(Errc::invalid_argument, "context index out of range");
    fill_context(out.data.data() + t * width, indices[t], data, graph, layout);
  }
  return out;
}

Network make_generator(const GanLayout& layout, std::size_t filters, Rng& rng) {
  Network g;
  g.add(make_conv1d(layout.channels + layout.noise_dim, filters, layout.slots, layout.slots, rng));
  g.add(make_activation(Activation::relu, filters));
  g.add(make_dense(filters, layout.channels, rng));
  g.add(make_activation(Activation::linear, layout.channels));
  return g;
}

Network make_discriminator(const GanLayout& layout, std::size_t filters, Rng& rng) {
  Network d;
  d.add(make_conv1d(2 * layout.channels, filters, layout.slots, layout.slots, rng));
  d.add(make_activation(Activation::tanh, filters));
  d.add(make_dense(filters, 1, rng));
  d.add(make_activation(Activation::sigmoid, 1));
  return d;
}

namespace {

Tensor generator_input(const Tensor& contexts, std::span<const std::size_t> rows,
                       const GanLayout& layout, Rng& rng) {
  const std::size_t ctx_w = layout.slots * layout.channels;
  Tensor in({rows.size(), layout.generator_input()});
  std::vector<double> z(layout.noise_dim);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (double& v : z) v = rng.normal();
    append_to_rows(contexts.data.data() + rows[t] * ctx_w, z.data(), layout.noise_dim, layout,
                   in.data.data() + t * layout.generator_input());
  }
  return in;
}

void discriminator_rows(const Tensor& contexts, std::span<const std::size_t> rows,
                        const Tensor& candidates, const GanLayout& layout, Tensor& out,
                        std::size_t offset) {
  const std::size_t ctx_w = layout.slots * layout.channels;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    append_to_rows(contexts.data.data() + rows[t] * ctx_w,
                   candidates.data.data() + t * layout.channels, layout.channels, layout,
                   out.data.data() + (offset + t) * layout.discriminator_input());
  }
}

std::vector<std::size_t> iota_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < n; ++t) rows[t] = t;
  return rows;
}

}  // namespace

Tensor generate(const Network& generator, const GanLayout& layout, const Tensor& contexts,
                Rng& rng) {
  const auto rows = iota_rows(contexts.rows());
  return generator.infer(generator_input(contexts, rows, layout, rng));
}

std::size_t select_snapshot(std::span<const std::optional<double>> metrics) {
  std::size_t best = metrics.size();
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    if (!metrics[k]) continue;
    if (best == metrics.size() || *metrics[k] < *metrics[best]) best = k;
  }
  if (best == metrics.size()) fail(Errc::invalid_argument, "no evaluated snapshot to select");
  return best;
}

TrainedSpaceGan reselect(TrainedSpaceGan model, SelectionMetric metric) {
  std::vector<std::optional<double>> values;
  for (const auto& s : model.snapshots) values.push_back(s.metric(metric));
  model.selected = select_snapshot(values);
  model.metric = metric;
  model.generator = clone_snapshot(model.snapshots[model.selected].generator);
  model.discriminator = clone_snapshot(model.snapshots[model.selected].discriminator);
  return model;
}

namespace {

struct DrawScore {
  double mie = 0.0;
  double rmse = 0.0;
  bool redrawn = false;
  bool degenerate = false;
};

DrawScore score_draw(const Network& generator, const GanLayout& layout, const Tensor& contexts,
                     std::span<const double> y_real, std::span<const double> lisa_real,
                     const WeightMatrix& w, std::uint64_t seed, std::size_t draw) {
  const std::size_t m = layout.channels - 1;
  DrawScore score;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Rng rng = attempt == 0 ? Rng::stream(seed, draw) : Rng::stream(seed ^ kRedrawSalt, draw);
    const Tensor out = generate(generator, layout, contexts, rng);
    std::vector<double> y_hat(out.rows());
    for (std::size_t t = 0; t < out.rows(); ++t) y_hat[t] = out.at(t, m);
    try {
      score.mie = mie_against(lisa_real, y_hat, w);
      score.rmse = rmse(y_real, y_hat);
      score.redrawn = attempt == 1;
      return score;
    } catch (const Error& e) {
      if (e.code() != Errc::degenerate_input) throw;
    }
  }
  score.degenerate = true;
  return score;
}

}  // namespace

SnapshotEvaluation evaluate_snapshot(const Network& generator, const GanLayout& layout,
                                     const SpatialDataset& data, const NeighborhoodGraph& graph,
                                     std::span<const std::size_t> indices, const WeightMatrix& w,
                                     std::size_t draws, std::uint64_t seed, Exec exec) {
  if (draws == 0) fail(Errc::invalid_argument, "evaluation needs at least one draw");
  if (w.size() != indices.size()) {
    fail(Errc::shape_mismatch, "weight matrix does not match the evaluated point set");
  }
  const Tensor contexts = build_contexts(data, graph, indices, layout);
  const auto y_real = standardized_target(data, indices, layout);
  const auto lisa_real = local_morans_i(y_real, w, Exec::serial);

  std::vector<DrawScore> scores(draws);
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(draws);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      const auto u = static_cast<std::size_t>(c);
      scores[u] = score_draw(generator, layout, contexts, y_real, lisa_real, w, seed, u);
    }
  } else {
    for (std::size_t c = 0; c < draws; ++c) {
      scores[c] = score_draw(generator, layout, contexts, y_real, lisa_real, w, seed, c);
    }
  }

  SnapshotEvaluation result;
  for (std::size_t c = 0; c < draws; ++c) {
    if (scores[c].degenerate) {
      fail(Errc::degenerate_input, "draw " + std::to_string(c) + " is constant after one redraw");
    }
    result.mie += scores[c].mie;
    result.rmse += scores[c].rmse;
    result.resampled += scores[c].redrawn ? 1 : 0;
  }
  result.mie /= static_cast<double>(draws);
  result.rmse /= static_cast<double>(draws);
  return result;
}

TrainedSpaceGan train(const SpatialDataset& data, std::span<const std::size_t> train_indices,
                      const NeighborhoodGraph& graph, const TrainConfig& config, Exec exec) {
  config.validate();
  data.validate();
  if (train_indices.size() < 2) fail(Errc::invalid_dimension, "training split needs >= 2 points");

  TrainedSpaceGan model;
  model.config = config;
  model.metric = config.metric;
  model.layout = make_layout(data, train_indices, graph, config.noise_dim);
  const GanLayout& layout = model.layout;

  Rng g_init = Rng::stream(config.seed, kGeneratorInitStream);
  Rng d_init = Rng::stream(config.seed, kDiscriminatorInitStream);
  Network generator = make_generator(layout, config.generator_filters, g_init);
  Network discriminator = make_discriminator(layout, config.discriminator_filters, d_init);

  const Tensor contexts = build_contexts(data, graph, train_indices, layout);
  Tensor real_rows({train_indices.size(), layout.channels});
  for (std::size_t t = 0; t < train_indices.size(); ++t) {
    const std::size_t i = train_indices[t];
    for (std::size_t c = 0; c + 1 < layout.channels; ++c) {
      real_rows.at(t, c) = layout.scaler.transform(data.features(i, c), c);
    }
    real_rows.at(t, layout.channels - 1) =
        layout.scaler.transform(data.target[i], layout.channels - 1);
  }

  const WeightMatrix eval_w =
      to_weight_matrix(restrict_graph(graph, data.coords, train_indices));

  const std::size_t L = config.batch;
  const double inv_l = 1.0 / static_cast<double>(L);
  const SgdConfig sgd{config.learning_rate, L};
  const std::size_t d_in = layout.discriminator_input();
  Rng rng = Rng::stream(config.seed, kTrainingStream);
  std::vector<std::size_t> picked(L);

  try {
    for (std::size_t step = 1; step <= config.tsteps; ++step) {
      // Discriminator ascent on log D(real | N) + log(1 - D(G(z | N))).
      for (auto& p : picked) p = rng.index(train_indices.size());
      const Tensor fake = generator.forward(generator_input(contexts, picked, layout, rng));
      Tensor real_batch({L, layout.channels});
      for (std::size_t t = 0; t < L; ++t) {
        std::copy_n(real_rows.data.data() + picked[t] * layout.channels, layout.channels,
                    real_batch.data.data() + t * layout.channels);
      }
      Tensor d_batch({2 * L, d_in});
      discriminator_rows(contexts, picked, real_batch, layout, d_batch, 0);
      discriminator_rows(contexts, picked, fake, layout, d_batch, L);
      const Tensor d_out = discriminator.forward(d_batch);
      Tensor d_grad({2 * L, 1});
      for (std::size_t t = 0; t < L; ++t) {
        d_grad.data[t] = inv_l / (d_out.data[t] + kLogEps);
        d_grad.data[L + t] = -inv_l / (1.0 - d_out.data[L + t] + kLogEps);
      }
      sgd_step(discriminator, discriminator.backward(d_grad), sgd, Direction::ascend);

      // Generator ascent on log D(G(z | N)) with fresh noise.
      const Tensor fake2 = generator.forward(generator_input(contexts, picked, layout, rng));
      Tensor g_batch({L, d_in});
      discriminator_rows(contexts, picked, fake2, layout, g_batch, 0);
      const Tensor g_out = discriminator.forward(g_batch);
      Tensor g_grad({L, 1});
      for (std::size_t t = 0; t < L; ++t) g_grad.data[t] = inv_l / (g_out.data[t] + kLogEps);
      const Gradients through_d = discriminator.backward(g_grad);
      Tensor fake_grad({L, layout.channels});
      const std::size_t row_w = 2 * layout.channels;
      for (std::size_t t = 0; t < L; ++t) {
        const double* src = through_d.input.data.data() + t * d_in;
        for (std::size_t s = 0; s < layout.slots; ++s) {
          for (std::size_t c = 0; c < layout.channels; ++c) {
            fake_grad.at(t, c) += src[s * row_w + layout.channels + c];
          }
        }
      }
      sgd_step(generator, generator.backward(fake_grad), sgd, Direction::ascend);

      if (step % config.snap == 0) {
        Snapshot snap;
        snap.step = step;
        snap.generator = clone_snapshot(generator);
        snap.discriminator = clone_snapshot(discriminator);
        const std::uint64_t eval_seed = splitmix64(config.seed ^ (0x5eed000000000000ULL + step));
        try {
          const auto eval = evaluate_snapshot(snap.generator, layout, data, graph, train_indices,
                                              eval_w, config.samples, eval_seed, exec);
          snap.mie = eval.mie;
          snap.rmse = eval.rmse;
        } catch (const Error& e) {
          // A collapsed generator leaves this snapshot unscored; selection skips it.
          if (e.code() != Errc::degenerate_input) throw;
        }
        model.snapshots.push_back(std::move(snap));
      }
    }
  } catch (const Error& e) {
    if (e.code() != Errc::numeric_fault) throw;
    model.fault = e.what();
    bool any_scored = false;
    for (const auto& s : model.snapshots) any_scored = any_scored || s.mie.has_value();
    if (!any_scored) throw;
  }

  return reselect(std::move(model), config.metric);
}

std::vector<GeneratedSample> sample(const TrainedSpaceGan& model, const SpatialDataset& data,
                                    const NeighborhoodGraph& graph,
                                    std::span<const std::size_t> indices, std::size_t count,
                                    std::uint64_t seed, Exec exec) {
  std::vector<GeneratedSample> out(count);
  if (count == 0) return out;
  const GanLayout& layout = model.layout;
  if (data.feature_count() + 1 != layout.channels) {
    fail(Errc::shape_mismatch, "dataset feature count differs from the trained model");
  }
  const Tensor contexts = build_contexts(data, graph, indices, layout);
  const std::size_t m = layout.channels - 1;
  auto one = [&](std::size_t draw) {
    Rng rng = Rng::stream(seed, draw);
    const Tensor gen = generate(model.generator, layout, contexts, rng);
    GeneratedSample s;
    s.target.resize(indices.size());
    s.features = Matrix(indices.size(), m);
    for (std::size_t t = 0; t < indices.size(); ++t) {
      for (std::size_t c = 0; c < m; ++c) s.features(t, c) = layout.scaler.inverse(gen.at(t, c), c);
      s.target[t] = layout.scaler.inverse(gen.at(t, m), m);
    }
    return s;
  };
  if (exec == Exec::parallel) {
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t d = 0; d < n; ++d) out[static_cast<std::size_t>(d)] = one(static_cast<std::size_t>(d));
  } else {
    for (std::size_t d = 0; d < count; ++d) out[d] = one(d);
  }
  return out;
}

void write_samples_csv(std::ostream& out, std::span<const GeneratedSample> samples,
                       std::span<const std::size_t> indices, std::span<const Point> coords) {
  const std::size_t m = samples.empty() ? 0 : samples.front().features.cols();
  out << "draw,index,c1,c2,y_hat";
  for (std::size_t c = 0; c < m; ++c) out << ",x_hat" << (c + 1);
  out << '\n' << std::setprecision(17);
  for (std::size_t d = 0; d < samples.size(); ++d) {
    for (std::size_t t = 0; t < indices.size(); ++t) {
      const Point& p = coords[indices[t]];
      out << d << ',' << indices[t] << ',' << p.c1 << ',' << p.c2 << ',' << samples[d].target[t];
      for (std::size_t c = 0; c < m; ++c) out << ',' << samples[d].features(t, c);
      out << '\n';
    }
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_checkpoints(const TrainedSpaceGan& model, const std::filesystem::path& directory,
                       const std::string& config_text) {
  std::filesystem::create_directories(directory);
  nlohmann::ordered_json manifest;
  manifest["schema_version"] = 1;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_text);
  manifest["config_hash"] = hash.str();
  manifest["metric"] = to_string(model.metric);
  manifest["status"] = model.fault ? "partial" : "complete";
  if (model.fault) manifest["fault"] = *model.fault;
  manifest["selected_step"] = model.snapshots.at(model.selected).step;
  manifest["snapshots"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < model.snapshots.size(); ++k) {
    const auto& s = model.snapshots[k];
    const std::string stem = "step_" + std::to_string(s.step);
    for (const auto& [suffix, net] :
         {std::pair{"_generator.net", &s.generator}, std::pair{"_discriminator.net", &s.discriminator}}) {
      std::ofstream f(directory / (stem + suffix));
      if (!f) fail(Errc::io, "cannot write checkpoint in " + directory.string());
      save_checkpoint(f, *net);
    }
    nlohmann::ordered_json entry;
    entry["step"] = s.step;
    entry["mie"] = s.mie ? nlohmann::ordered_json(*s.mie) : nlohmann::ordered_json(nullptr);
    entry["rmse"] = s.rmse ? nlohmann::ordered_json(*s.rmse) : nlohmann::ordered_json(nullptr);
    entry["generator"] = stem + "_generator.net";
    entry["discriminator"] = stem + "_discriminator.net";
    entry["selected"] = k == model.selected;
    manifest["snapshots"].push_back(std::move(entry));
  }
  std::ofstream f(directory / "manifest.json");
  if (!f) fail(Errc::io, "cannot write manifest in " + directory.string());
  f << manifest.dump(2) << '\n';
}

}  // namespace spacegan
