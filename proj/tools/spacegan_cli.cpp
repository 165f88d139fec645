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

// spacegan: batch driver for data generation, training and the two
// cross-validated experiments. Outputs are deterministic given config + seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "spacegan/datasets.hpp"
#include "spacegan/error.hpp"
#include "spacegan/experiments.hpp"
#include "spacegan/spacegan.hpp"

namespace {

using spacegan::RunConfig;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

// Raw flag values; only those actually given override the config file.
struct Flags {
  std::string dataset;
  std::string config_file;
  std::string neighbours;
  std::string california_csv;
  std::string profile;
  std::string metric;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t tsteps = 0, snap = 0, samples_c = 0, ensemble_b = 0, bins = 0, max_folds = 0;
  std::size_t max_points = 0;
  long fold = -1;
  bool oracle_echo = false;
  std::vector<CLI::Option*> given;
  CLI::Option* opt(const std::string& name) const {
    for (auto* o : given) {
      if (o->check_lname(name)) return o->count() > 0 ? o : nullptr;
    }
    return nullptr;
  }
};

enum class Kind { gen_data, train, experiment };

void add_run_flags(CLI::App& cmd, Flags& f, Kind kind) {
  auto& g = f.given;
  if (kind != Kind::gen_data) {
    g.push_back(cmd.add_option("--dataset", f.dataset,
                               "toy1 | toy2 | california15 | california50 | csv:<path>"));
  }
  g.push_back(cmd.add_option("--config", f.config_file, "JSON config; flags override it")
                  ->check(CLI::ExistingFile));
  g.push_back(cmd.add_option("--seed", f.seed, "run seed"));
  g.push_back(cmd.add_option("--metric", f.metric, "snapshot selection metric")
                  ->check(CLI::IsMember({"mie", "rmse"})));
  g.push_back(cmd.add_option("--tsteps", f.tsteps, "training steps"));
  g.push_back(cmd.add_option("--snap", f.snap, "snapshot interval"));
  g.push_back(cmd.add_option("--samples-c", f.samples_c, "generator draws per evaluation"));
  g.push_back(cmd.add_option("--ensemble-b", f.ensemble_b, "ensemble members"));
  g.push_back(cmd.add_option("--bins", f.bins, "strip bins per axis"));
  g.push_back(cmd.add_option("--out", f.out, "output directory (default $SPACEGAN_OUT)"));
  g.push_back(cmd.add_option("--profile", f.profile, "default preset")
                  ->check(CLI::IsMember({"desk", "paper"})));
  g.push_back(cmd.add_option("--neighbours", f.neighbours, "queen:RxC | knn:K"));
  g.push_back(cmd.add_option("--california-csv", f.california_csv,
                             "California Housing CSV (default $SPACEGAN_CALIFORNIA_CSV)"));
  g.push_back(cmd.add_option("--max-points", f.max_points, "seeded row subsample; 0 = all"));
  if (kind == Kind::experiment) {
    g.push_back(cmd.add_option("--max-folds", f.max_folds, "run only the first K folds"));
    g.push_back(cmd.add_flag("--oracle-echo", f.oracle_echo, "add a method returning the real y"));
  } else if (kind == Kind::train) {
    g.push_back(cmd.add_option("--fold", f.fold, "train on this fold's train split; -1 = all rows"));
  }
}

const char* env_or_null(const char* name) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : nullptr;
}

// Precedence: explicit flag > config file > dataset/profile preset > environment.
RunConfig resolve(const Flags& f, const std::optional<std::string>& positional = {}) {
  nlohmann::json file = nlohmann::json::object();
  if (f.opt("config")) {
    std::ifstream in(f.config_file);
    try {
      file = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      spacegan::fail(spacegan::Errc::parse, f.config_file + ": " + e.what());
    }
    if (!file.is_object()) spacegan::fail(spacegan::Errc::parse, "config must be a JSON object");
  }
  auto pick = [&](const char* flag, const char* key, const std::string& value,
                  const std::string& fallback) {
    if (f.opt(flag)) return value;
    if (file.contains(key)) return file[key].get<std::string>();
    return fallback;
  };
  const std::string dataset = positional ? *positional : pick("dataset", "dataset", f.dataset, "toy1");
  const std::string profile = pick("profile", "profile", f.profile, "desk");

  RunConfig c = spacegan::default_config(spacegan::profile_from_string(profile), dataset);
  if (const char* csv = env_or_null("SPACEGAN_CALIFORNIA_CSV")) c.california_csv = csv;
  if (const char* out = env_or_null("SPACEGAN_OUT")) c.out = out;
  c = spacegan::apply_json(c, file);
  c.dataset = dataset;
  c.profile = spacegan::profile_from_string(profile);

  if (f.opt("seed")) c.seed = f.seed;
  if (f.opt("metric")) c.metric = spacegan::metric_from_string(f.metric);
  if (f.opt("tsteps")) c.tsteps = f.tsteps;
  if (f.opt("snap")) c.snap = f.snap;
  if (f.opt("samples-c")) c.samples_c = f.samples_c;
  if (f.opt("ensemble-b")) c.ensemble_b = f.ensemble_b;
  if (f.opt("bins")) c.bins = f.bins;
  if (f.opt("out")) c.out = f.out;
  if (f.opt("neighbours")) c.neighbours = f.neighbours;
  if (f.opt("california-csv")) c.california_csv = f.california_csv;
  if (f.opt("max-points")) c.max_points = f.max_points;
  if (f.opt("max-folds")) c.max_folds = f.max_folds;
  if (f.opt("oracle-echo")) c.oracle_echo = f.oracle_echo;
  if (c.out.empty()) c.out = "spacegan-out";
  c.validate();
  return c;
}

void print_summary(const spacegan::SpatialDataset& data) {
  std::cout << std::left << std::setw(14) << "column" << std::right << std::setw(8) << "n"
            << std::setw(14) << "mean" << std::setw(14) << "std" << std::setw(14) << "min"
            << std::setw(14) << "max" << '\n';
  std::cout << std::setprecision(6);
  for (const auto& s : spacegan::summarize(data)) {
    std::cout << std::left << std::setw(14) << s.name << std::right << std::setw(8) << s.count
              << std::setw(14) << s.mean << std::setw(14) << s.std << std::setw(14) << s.min
              << std::setw(14) << s.max << '\n';
  }
}

int cmd_gen_data(const std::string& dataset, const Flags& f) {
  if (dataset.rfind("csv:", 0) == 0) spacegan::fail(spacegan::Errc::invalid_argument,
                                                    "gen-data needs a built-in dataset");
  const RunConfig c = resolve(f, dataset);
  spacegan::SpatialDataset data = spacegan::load_dataset(c);
  std::filesystem::create_directories(c.out);
  const auto path = std::filesystem::path(c.out) / (dataset + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) spacegan::fail(spacegan::Errc::io, "cannot write " + path.string());
  spacegan::write_dataset_csv(out, data);
  out.close();
  std::cout << "wrote " << path.string() << " (" << data.size() << " rows)\n";
  print_summary(data);
  return 0;
}

int cmd_train(const Flags& f) {
  const RunConfig c = resolve(f);
  const spacegan::Problem p = spacegan::load_problem(c);
  std::vector<std::size_t> rows;
  if (f.fold < 0) {
    rows.resize(p.data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  } else {
    const auto k = static_cast<std::size_t>(f.fold);
    if (k >= p.plan.size()) spacegan::fail(spacegan::Errc::invalid_argument, "no such fold");
    rows = p.plan.folds[k].train;
  }
  const std::uint64_t seed = f.fold < 0 ? c.seed : spacegan::fold_seed(c.seed, f.fold, 1);
  const auto model = spacegan::train(p.data, rows, p.graph, spacegan::train_config(c, seed));
  const std::string config_text = spacegan::to_json(c).dump();
  spacegan::write_checkpoints(model, c.out, config_text);
  const auto& best = model.snapshots.at(model.selected);
  std::cout << "snapshots " << model.snapshots.size() << ", selected step " << best.step << " ("
            << spacegan::to_string(model.metric) << ")\n";
  if (model.fault) {
    std::cerr << "training stopped early: " << *model.fault << '\n';
    return kExitPartial;
  }
  return 0;
}

int report_status(const std::vector<spacegan::TrainedSpaceGan>& models) {
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (models[k].fault) {
      std::cerr << "fold " << k << " training stopped early: " << *models[k].fault << '\n';
      return kExitPartial;
    }
  }
  return 0;
}

void print_report(const spacegan::ExperimentReport& r, const char* score) {
  std::cout << std::left << std::setw(16) << "method" << std::right << std::setw(14) << score
            << std::setw(14) << "std.err" << '\n'
            << std::setprecision(6);
  for (const auto& m : r.methods) {
    std::cout << std::left << std::setw(16) << m.name << std::right << std::setw(14) << m.mean
              << std::setw(14) << m.standard_error << '\n';
  }
}

int cmd_experiment(int which, const Flags& f) {
  const RunConfig c = resolve(f);
  const spacegan::Problem p = spacegan::load_problem(c);
  const auto models = spacegan::train_folds(p, c);
  const auto report = which == 1 ? spacegan::run_experiment1(p, c, models, c.out)
                                 : spacegan::run_experiment2(p, c, models, c.out);
  print_report(report, which == 1 ? "test MIE" : "test RMSE");
  std::cout << "outputs in " << c.out << '\n';
  return report_status(models);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SpaceGAN experiments: data generation, training, cross-validated evaluation"};
  app.require_subcommand(1);

  Flags gen_flags, train_flags, e1_flags, e2_flags;
  std::string gen_dataset;
  auto* gen = app.add_subcommand("gen-data", "write a dataset CSV and print its summary");
  gen->add_option("dataset", gen_dataset, "toy1 | toy2 | california15 | california50")
      ->required()
      ->check(CLI::IsMember({"toy1", "toy2", "california15", "california50"}));
  add_run_flags(*gen, gen_flags, Kind::gen_data);
  auto* tr = app.add_subcommand("train", "train one SpaceGAN and write snapshots + manifest");
  add_run_flags(*tr, train_flags, Kind::train);
  auto* e1 = app.add_subcommand("experiment1", "test-split MIE of SpaceGAN vs GP per fold");
  add_run_flags(*e1, e1_flags, Kind::experiment);
  auto* e2 = app.add_subcommand("experiment2", "test-split RMSE of the four ensembles per fold");
  add_run_flags(*e2, e2_flags, Kind::experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(gen_dataset, gen_flags);
    if (tr->parsed()) return cmd_train(train_flags);
    if (e1->parsed()) return cmd_experiment(1, e1_flags);
    return cmd_experiment(2, e2_flags);
  } catch (const spacegan::Error& e) {
    std::cerr << "error (" << spacegan::to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == spacegan::Errc::invalid_argument ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
