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

#include "spacegan/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spacegan/error.hpp"
#include "spacegan/gp.hpp"
#include "spacegan/rng.hpp"
#include "spacegan/spatial_stats.hpp"

namespace spacegan {

namespace {

constexpr int kReportSchemaVersion = 1;

enum : std::uint64_t { kTrainPurpose = 1, kEvalPurpose = 2, kGpPurpose = 3, kGanningPurpose = 4,
                       kGpBagPurpose = 6, kBootPurpose = 7, kSubsamplePurpose = 8 };

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::io, "cannot write " + path.string());
  f << text;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::io, "cannot write " + path.string());
  writer(f);
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) fail(Errc::invalid_argument, "bad " + what + " '" + text + "'");
  return static_cast<std::size_t>(v);
}

// `keep` entries of `pool` chosen by a seeded Fisher-Yates pass, ascending.
std::vector<std::size_t> seeded_subset(std::vector<std::size_t> pool, std::size_t keep,
                                       std::uint64_t seed) {
  if (pool.size() <= keep) return pool;
  Rng rng(seed);
  for (std::size_t k = pool.size() - 1; k > 0; --k) std::swap(pool[k], pool[rng.index(k + 1)]);
  pool.resize(keep);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

const char* to_string(Profile profile) { return profile == Profile::desk ? "desk" : "paper"; }

Profile profile_from_string(const std::string& name) {
  if (name == "desk") return Profile::desk;
  if (name == "paper") return Profile::paper;
  fail(Errc::invalid_argument, "unknown profile '" + name + "'");
}

void RunConfig::validate() const {
  const bool known = dataset == "toy1" || dataset == "toy2" || dataset == "california15" ||
                     dataset == "california50" || dataset.rfind("csv:", 0) == 0;
  if (!known) fail(Errc::invalid_argument, "unknown dataset '" + dataset + "'");
  if (ensemble_b == 0) fail(Errc::invalid_argument, "ensemble B must be >= 1");
  if (bins == 0) fail(Errc::invalid_argument, "bins must be >= 1");
  if (max_points != 0 && max_points < 2 * bins) fail(Errc::invalid_argument, "max_points too small for the folds");
  if ((dataset == "toy1" || dataset == "toy2") && max_points != 0) {
    fail(Errc::invalid_argument, "max_points would break the toy grids");
  }
  if (gp_max_train < 2) fail(Errc::invalid_argument, "gp_max_train must be >= 2");
  if (!(gp_lengthscale > 0.0)) fail(Errc::invalid_argument, "GP lengthscale must be positive");
  const bool gridded = dataset == "toy1" || dataset == "toy2";
  if (neighbours.rfind("queen:", 0) == 0 && !gridded && dataset.rfind("csv:", 0) != 0) {
    fail(Errc::invalid_argument, "queen neighbourhoods need gridded data");
  }
  train_config(*this, seed).validate();
}

RunConfig default_config(Profile profile, const std::string& dataset) {
  RunConfig c;
  c.profile = profile;
  c.dataset = dataset;
  if (profile == Profile::paper) {
    c.tsteps = 20000;
    c.samples_c = 500;
    c.ensemble_b = 100;
  }
  const bool california = dataset == "california15" || dataset == "california50";
  if (profile == Profile::desk && california) c.max_points = 2000;
  if (dataset == "toy2") {
    c.generator_filters = c.discriminator_filters = 100;
  } else if (dataset == "california15") {
    c.generator_filters = c.discriminator_filters = 100;
    c.noise_dim = 15;
  } else if (dataset == "california50") {
    c.generator_filters = c.discriminator_filters = 200;
    c.noise_dim = 15;
  }
  return c;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["dataset"] = c.dataset;
  j["neighbours"] = c.neighbours;
  j["california_csv"] = c.california_csv;
  j["max_points"] = c.max_points;
  j["profile"] = to_string(c.profile);
  j["seed"] = c.seed;
  j["metric"] = to_string(c.metric);
  j["tsteps"] = c.tsteps;
  j["snap"] = c.snap;
  j["samples_c"] = c.samples_c;
  j["ensemble_b"] = c.ensemble_b;
  j["bins"] = c.bins;
  j["batch"] = c.batch;
  j["learning_rate"] = c.learning_rate;
  j["noise_dim"] = c.noise_dim;
  j["generator_filters"] = c.generator_filters;
  j["discriminator_filters"] = c.discriminator_filters;
  j["gp_max_train"] = c.gp_max_train;
  j["gp_lengthscale"] = c.gp_lengthscale;
  j["tree_max_depth"] = c.tree.max_depth;
  j["tree_min_samples_leaf"] = c.tree.min_samples_leaf;
  j["max_folds"] = c.max_folds;
  j["oracle_echo"] = c.oracle_echo;
  return j;
}

RunConfig apply_json(RunConfig c, const nlohmann::json& j) {
  if (!j.is_object()) fail(Errc::parse, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "dataset") c.dataset = value.get<std::string>();
      else if (key == "neighbours") c.neighbours = value.get<std::string>();
      else if (key == "california_csv") c.california_csv = value.get<std::string>();
      else if (key == "max_points") c.max_points = value.get<std::size_t>();
      else if (key == "profile") c.profile = profile_from_string(value.get<std::string>());
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "metric") c.metric = metric_from_string(value.get<std::string>());
      else if (key == "tsteps") c.tsteps = value.get<std::size_t>();
      else if (key == "snap") c.snap = value.get<std::size_t>();
      else if (key == "samples_c") c.samples_c = value.get<std::size_t>();
      else if (key == "ensemble_b") c.ensemble_b = value.get<std::size_t>();
      else if (key == "bins") c.bins = value.get<std::size_t>();
      else if (key == "batch") c.batch = value.get<std::size_t>();
      else if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "noise_dim") c.noise_dim = value.get<std::size_t>();
      else if (key == "generator_filters") c.generator_filters = value.get<std::size_t>();
      else if (key == "discriminator_filters") c.discriminator_filters = value.get<std::size_t>();
      else if (key == "gp_max_train") c.gp_max_train = value.get<std::size_t>();
      else if (key == "gp_lengthscale") c.gp_lengthscale = value.get<double>();
      else if (key == "tree_max_depth") c.tree.max_depth = value.get<std::size_t>();
      else if (key == "tree_min_samples_leaf") c.tree.min_samples_leaf = value.get<std::size_t>();
      else if (key == "max_folds") c.max_folds = value.get<std::size_t>();
      else if (key == "oracle_echo") c.oracle_echo = value.get<bool>();
      else if (key == "out") c.out = value.get<std::string>();
      else fail(Errc::parse, "unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::parse, "config key '" + key + "': " + e.what());
    }
  }
  return c;
}

TrainConfig train_config(const RunConfig& c, std::uint64_t seed) {
  TrainConfig t;
  t.tsteps = c.tsteps;
  t.batch = c.batch;
  t.snap = c.snap;
  t.samples = c.samples_c;
  t.noise_dim = c.noise_dim;
  t.generator_filters = c.generator_filters;
  t.discriminator_filters = c.discriminator_filters;
  t.learning_rate = c.learning_rate;
  t.metric = c.metric;
  t.seed = seed;
  return t;
}

SpatialDataset load_dataset(const RunConfig& c) {
  if (c.dataset == "toy1") return gen_toy1(c.seed);
  if (c.dataset == "toy2") return gen_toy2(c.seed);
  if (c.dataset == "california15" || c.dataset == "california50") {
    if (c.california_csv.empty()) {
      fail(Errc::invalid_argument, "California datasets need --california-csv (or SPACEGAN_CALIFORNIA_CSV)");
    }
    return load_california(c.california_csv);
  }
  if (c.dataset.rfind("csv:", 0) == 0) return load_dataset_csv(c.dataset.substr(4));
  fail(Errc::invalid_argument, "unknown dataset '" + c.dataset + "'");
}

NeighborhoodGraph build_graph(const RunConfig& c, const SpatialDataset& data) {
  std::string spec = c.neighbours;
  if (spec.empty()) {
    if (c.dataset == "toy1") spec = "queen:20x20";
    else if (c.dataset == "toy2") spec = "queen:29x29";
    else if (c.dataset == "california15") spec = "knn:15";
    else if (c.dataset == "california50") spec = "knn:50";
    else fail(Errc::invalid_argument, "csv datasets need --neighbours queen:RxC or knn:K");
  }
  if (spec.rfind("knn:", 0) == 0) return knn_graph(data.coords, parse_count(spec.substr(4), "k"));
  if (spec.rfind("queen:", 0) == 0) {
    const std::string dims = spec.substr(6);
    const auto x = dims.find('x');
    if (x == std::string::npos) fail(Errc::invalid_argument, "queen spec must be queen:RxC");
    const std::size_t rows = parse_count(dims.substr(0, x), "rows");
    const std::size_t cols = parse_count(dims.substr(x + 1), "cols");
    if (rows * cols != data.size()) {
      fail(Errc::invalid_argument, "queen grid " + dims + " does not cover " +
                                       std::to_string(data.size()) + " points");
    }
    return queen_graph(rows, cols);
  }
  fail(Errc::invalid_argument, "unknown neighbourhood spec '" + spec + "'");
}

Problem load_problem(const RunConfig& c) {
  c.validate();
  Problem p;
  p.data = load_dataset(c);
  p.data.validate();
  if (c.max_points != 0 && p.data.size() > c.max_points) {
    std::vector<std::size_t> all(p.data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    p.data = p.data.subset(seeded_subset(std::move(all), c.max_points,
                                         fold_seed(c.seed, 0, kSubsamplePurpose)));
  }
  p.graph = build_graph(c, p.data);
  p.plan = spatial_folds(p.data.coords, p.graph, c.bins);
  return p;
}

std::uint64_t fold_seed(std::uint64_t run_seed, std::size_t fold, std::uint64_t purpose) {
  return splitmix64(splitmix64(run_seed) ^ splitmix64((purpose << 32) + fold));
}

std::size_t fold_count(const Problem& problem, const RunConfig& c) {
  const std::size_t all = problem.plan.size();
  return c.max_folds == 0 ? all : std::min(all, c.max_folds);
}

std::vector<TrainedSpaceGan> train_folds(const Problem& problem, const RunConfig& c) {
  std::vector<TrainedSpaceGan> models;
  for (std::size_t f = 0; f < fold_count(problem, c); ++f) {
    const auto& fold = problem.plan.folds[f];
    models.push_back(train(problem.data, fold.train, problem.graph,
                           train_config(c, fold_seed(c.seed, f, kTrainPurpose))));
  }
  return models;
}

MethodSummary summarize_method(std::string name, std::vector<double> per_fold) {
  MethodSummary s;
  s.name = std::move(name);
  s.per_fold = std::move(per_fold);
  const auto k = static_cast<double>(s.per_fold.size());
  if (s.per_fold.empty()) return s;
  for (double v : s.per_fold) s.mean += v;
  s.mean /= k;
  if (s.per_fold.size() > 1) {
    double ss = 0.0;
    for (double v : s.per_fold) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
  }
  return s;
}

const MethodSummary& ExperimentReport::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.name == name) return m;
  }
  fail(Errc::invalid_argument, "no method '" + name + "' in report");
}

nlohmann::ordered_json folds_manifest(const std::string& command, const RunConfig& c,
                                      const std::vector<TrainedSpaceGan>& models) {
  nlohmann::ordered_json m;
  m["schema_version"] = kReportSchemaVersion;
  m["command"] = command;
  const std::string config_text = to_json(c).dump();
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_text);
  m["config_hash"] = hash.str();
  m["config"] = to_json(c);
  bool partial = false;
  m["folds"] = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < models.size(); ++f) {
    const auto& model = models[f];
    partial = partial || model.fault.has_value();
    nlohmann::ordered_json entry;
    entry["fold"] = f;
    entry["selected_step"] = model.snapshots.at(model.selected).step;
    entry["selected_metric"] = to_string(model.metric);
    entry["status"] = model.fault ? "partial" : "complete";
    entry["snapshots"] = nlohmann::ordered_json::array();
    for (const auto& s : model.snapshots) {
      nlohmann::ordered_json snap;
      snap["step"] = s.step;
      snap["mie"] = s.mie ? nlohmann::ordered_json(*s.mie) : nlohmann::ordered_json(nullptr);
      snap["rmse"] = s.rmse ? nlohmann::ordered_json(*s.rmse) : nlohmann::ordered_json(nullptr);
      entry["snapshots"].push_back(std::move(snap));
    }
    m["folds"].push_back(std::move(entry));
  }
  m["status"] = partial ? "partial" : "complete";
  return m;
}

namespace {

struct GpSetup {
  std::vector<std::size_t> indices;  // GP training points (subsampled train split)
  Scaler coord_scaler;
  Scaler target_scaler;
  GpModel model;
};

Matrix coordinate_matrix(const SpatialDataset& data, std::span<const std::size_t> indices) {
  Matrix m(indices.size(), 2);
  for (std::size_t t = 0; t < indices.size(); ++t) {
    m(t, 0) = data.coords[indices[t]].c1;
    m(t, 1) = data.coords[indices[t]].c2;
  }
  return m;
}

GpSetup fit_gp(const Problem& p, const RunConfig& c, const Fold& fold, std::uint64_t seed) {
  GpSetup gp;
  gp.indices = seeded_subset(fold.train, c.gp_max_train, seed);
  const Matrix coords = coordinate_matrix(p.data, gp.indices);
  gp.coord_scaler = scaler_fit(coords);
  std::vector<double> y(gp.indices.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = p.data.target[gp.indices[t]];
  gp.target_scaler = scaler_fit(y);
  gp.model = gp_fit(scaler_transform(coords, gp.coord_scaler), scaler_transform(y, gp.target_scaler),
                    c.gp_lengthscale);
  return gp;
}

std::vector<double> targets_at(const SpatialDataset& data, std::span<const std::size_t> indices) {
  std::vector<double> y(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) y[t] = data.target[indices[t]];
  return y;
}

nlohmann::ordered_json summary_json(const std::vector<MethodSummary>& methods) {
  nlohmann::ordered_json j;
  for (const auto& m : methods) {
    j[m.name]["mean"] = m.mean;
    j[m.name]["standard_error"] = m.standard_error;
  }
  return j;
}

void check_models(const Problem& p, const RunConfig& c, const std::vector<TrainedSpaceGan>& models) {
  if (models.size() != fold_count(p, c)) {
    fail(Errc::invalid_argument, "expected one trained model per fold");
  }
}

}  // namespace

ExperimentReport run_experiment1(const Problem& p, const RunConfig& c,
                                 const std::vector<TrainedSpaceGan>& models,
                                 const std::filesystem::path& out) {
  check_models(p, c, models);
  if (!out.empty()) std::filesystem::create_directories(out);
  const std::size_t folds = models.size();
  std::vector<double> gan_mie(folds), gp_mie(folds), echo_mie(folds);
  nlohmann::ordered_json fold_entries = nlohmann::ordered_json::array();

  for (std::size_t f = 0; f < folds; ++f) {
    const Fold& fold = p.plan.folds[f];
    check_fold(fold, p.graph);
    const TrainedSpaceGan& model = models[f];
    const WeightMatrix w_test = to_weight_matrix(restrict_graph(p.graph, p.data.coords, fold.test));
    const std::uint64_t eval_seed = fold_seed(c.seed, f, kEvalPurpose);

    const auto eval = evaluate_snapshot(model.generator, model.layout, p.data, p.graph, fold.test,
                                        w_test, c.samples_c, eval_seed);
    gan_mie[f] = eval.mie;

    const GpSetup gp = fit_gp(p, c, fold, fold_seed(c.seed, f, kGpPurpose));
    const Matrix test_coords = coordinate_matrix(p.data, fold.test);
    const GpPrediction post = gp_predict(gp.model, scaler_transform(test_coords, gp.coord_scaler));
    std::vector<double> gp_mean(post.mean.data(), post.mean.data() + post.mean.size());
    const auto y_test = targets_at(p.data, fold.test);
    const auto y_test_std = standardize(y_test);
    gp_mie[f] = mie(y_test_std, gp_mean, w_test);
    echo_mie[f] = mie(y_test_std, y_test_std, w_test);

    nlohmann::ordered_json entry;
    entry["fold"] = f;
    entry["axis"] = fold.axis;
    entry["bin"] = fold.bin;
    entry["n_train"] = fold.train.size();
    entry["n_buffer"] = fold.buffer.size();
    entry["n_test"] = fold.test.size();
    entry["selected_step"] = model.snapshots.at(model.selected).step;
    entry["mie"]["spacegan"] = gan_mie[f];
    entry["mie"]["gp"] = gp_mie[f];
    if (c.oracle_echo) entry["mie"]["echo"] = echo_mie[f];
    fold_entries.push_back(std::move(entry));

    if (!out.empty()) {
      // Same streams as the evaluation above, so the exported draws are the scored ones.
      const auto draws = sample(model, p.data, p.graph, fold.test, c.samples_c, eval_seed);
      std::vector<double> gan_surface(fold.test.size(), 0.0);
      for (const auto& d : draws) {
        for (std::size_t t = 0; t < gan_surface.size(); ++t) gan_surface[t] += d.target[t];
      }
      for (double& v : gan_surface) v /= static_cast<double>(draws.size());
      std::vector<double> gp_raw(gp_mean.size());
      for (std::size_t t = 0; t < gp_raw.size(); ++t) gp_raw[t] = gp.target_scaler.inverse(gp_mean[t], 0);

      const auto lisa_real = local_morans_i(y_test_std, w_test);
      std::vector<NamedColumn> extra;
      extra.push_back({"y_spacegan", gan_surface});
      extra.push_back({"I_spacegan", local_morans_i(gan_surface, w_test)});
      extra.push_back({"y_gp", gp_raw});
      extra.push_back({"I_gp", local_morans_i(gp_mean, w_test)});
      write_file(out / ("lisa_" + std::to_string(f) + ".csv"), [&](std::ostream& os) {
        write_lisa_csv(os, fold.test, p.data.coords, y_test, lisa_real, extra);
      });
      write_file(out / ("samples_" + std::to_string(f) + ".csv"), [&](std::ostream& os) {
        write_samples_csv(os, draws, fold.test, p.data.coords);
      });
    }
  }

  ExperimentReport report;
  report.methods.push_back(summarize_method("spacegan", gan_mie));
  report.methods.push_back(summarize_method("gp", gp_mie));
  if (c.oracle_echo) report.methods.push_back(summarize_method("echo", echo_mie));

  report.metrics["schema_version"] = kReportSchemaVersion;
  report.metrics["experiment"] = 1;
  report.metrics["dataset"] = c.dataset;
  report.metrics["seed"] = c.seed;
  report.metrics["score"] = "test_mie";
  report.metrics["folds"] = std::move(fold_entries);
  report.metrics["summary"] = summary_json(report.methods);
  report.manifest = folds_manifest("experiment1", c, models);

  if (!out.empty()) {
    write_text(out / "metrics.json", report.metrics.dump(2) + "\n");
    write_text(out / "manifest.json", report.manifest.dump(2) + "\n");
    write_file(out / "folds.csv", [&](std::ostream& os) { write_folds_csv(os, p.plan); });
  }
  return report;
}

ExperimentReport run_experiment2(const Problem& p, const RunConfig& c,
                                 const std::vector<TrainedSpaceGan>& models,
                                 const std::filesystem::path& out) {
  check_models(p, c, models);
  if (!out.empty()) std::filesystem::create_directories(out);
  const std::size_t folds = models.size();
  std::vector<double> by_mie(folds), by_rmse(folds), gp_bag(folds), boot(folds);
  nlohmann::ordered_json fold_entries = nlohmann::ordered_json::array();

  for (std::size_t f = 0; f < folds; ++f) {
    const Fold& fold = p.plan.folds[f];
    check_fold(fold, p.graph);  // train/test disjoint and buffered before anything is scored
    const auto mie_model = reselect(models[f], SelectionMetric::mie);
    const auto rmse_model = reselect(models[f], SelectionMetric::rmse);
    const Matrix test_design = design_matrix(p.data, fold.test);
    const auto y_test = targets_at(p.data, fold.test);

    // Both SpaceGAN ensembles draw from the same member streams so they differ only in
    // the selected snapshot; an identical selection reuses the fitted ensemble.
    const std::uint64_t ganning_seed = fold_seed(c.seed, f, kGanningPurpose);
    const Ensemble e_mie = ganning(mie_model, p.data, p.graph, fold.train, c.ensemble_b,
                                   ganning_seed, c.tree);
    const Ensemble e_rmse = mie_model.selected == rmse_model.selected
                                ? e_mie
                                : ganning(rmse_model, p.data, p.graph, fold.train, c.ensemble_b,
                                          ganning_seed, c.tree);
    const GpSetup gp = fit_gp(p, c, fold, fold_seed(c.seed, f, kGpPurpose));
    const Ensemble e_gp = gp_bagging(
        gp.model, scaler_transform(coordinate_matrix(p.data, gp.indices), gp.coord_scaler),
        gp.target_scaler, design_matrix(p.data, gp.indices), c.ensemble_b,
        fold_seed(c.seed, f, kGpBagPurpose), c.tree);
    const Ensemble e_boot = spatial_bootstrap(p.data, p.graph, fold.train, c.ensemble_b,
                                              fold_seed(c.seed, f, kBootPurpose), c.tree);

    const auto pred_mie = ensemble_predict(e_mie, test_design);
    const auto pred_rmse = ensemble_predict(e_rmse, test_design);
    const auto pred_gp = ensemble_predict(e_gp, test_design);
    const auto pred_boot = ensemble_predict(e_boot, test_design);
    by_mie[f] = rmse(y_test, pred_mie);
    by_rmse[f] = rmse(y_test, pred_rmse);
    gp_bag[f] = rmse(y_test, pred_gp);
    boot[f] = rmse(y_test, pred_boot);

    nlohmann::ordered_json entry;
    entry["fold"] = f;
    entry["axis"] = fold.axis;
    entry["bin"] = fold.bin;
    entry["n_train"] = fold.train.size();
    entry["n_buffer"] = fold.buffer.size();
    entry["n_test"] = fold.test.size();
    entry["selected_step_mie"] = mie_model.snapshots.at(mie_model.selected).step;
    entry["selected_step_rmse"] = rmse_model.snapshots.at(rmse_model.selected).step;
    entry["rmse"]["spacegan_mie"] = by_mie[f];
    entry["rmse"]["spacegan_rmse"] = by_rmse[f];
    entry["rmse"]["gp"] = gp_bag[f];
    entry["rmse"]["spatial_boot"] = boot[f];
    fold_entries.push_back(std::move(entry));

    if (!out.empty()) {
      write_file(out / ("predictions_" + std::to_string(f) + ".csv"), [&](std::ostream& os) {
        os << "index,c1,c2,y,spacegan_mie,spacegan_rmse,gp,spatial_boot\n" << std::setprecision(17);
        for (std::size_t t = 0; t < fold.test.size(); ++t) {
          const Point& pt = p.data.coords[fold.test[t]];
          os << fold.test[t] << ',' << pt.c1 << ',' << pt.c2 << ',' << y_test[t] << ','
             << pred_mie[t] << ',' << pred_rmse[t] << ',' << pred_gp[t] << ',' << pred_boot[t]
             << '\n';
        }
      });
    }
  }

  ExperimentReport report;
  report.methods.push_back(summarize_method("spacegan_mie", by_mie));
  report.methods.push_back(summarize_method("spacegan_rmse", by_rmse));
  report.methods.push_back(summarize_method("gp", gp_bag));
  report.methods.push_back(summarize_method("spatial_boot", boot));

  report.metrics["schema_version"] = kReportSchemaVersion;
  report.metrics["experiment"] = 2;
  report.metrics["dataset"] = c.dataset;
  report.metrics["seed"] = c.seed;
  report.metrics["ensemble_b"] = c.ensemble_b;
  report.metrics["score"] = "test_rmse";
  report.metrics["folds"] = std::move(fold_entries);
  report.metrics["summary"] = summary_json(report.methods);
  report.manifest = folds_manifest("experiment2", c, models);

  if (!out.empty()) {
    write_text(out / "metrics.json", report.metrics.dump(2) + "\n");
    write_text(out / "manifest.json", report.manifest.dump(2) + "\n");
    write_file(out / "folds.csv", [&](std::ostream& os) { write_folds_csv(os, p.plan); });
  }
  return report;
}

}  // namespace spacegan
