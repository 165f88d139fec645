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

// Acceptance report: one PASS/FAIL line per criterion, SKIP when a required
// input is unavailable. Exit status is the number of failed criteria.
// argv[1] is the path of the CLI binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "spacegan/datasets.hpp"
#include "spacegan/error.hpp"
#include "spacegan/experiments.hpp"
#include "spacegan/geometry.hpp"
#include "spacegan/gp.hpp"
#include "spacegan/neural.hpp"
#include "spacegan/spacegan.hpp"
#include "spacegan/spatial_cv.hpp"
#include "spacegan/spatial_stats.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace spacegan;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool partial = false;  // passed what could be checked; part of the criterion was not run
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Outcome lisa_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  testing::Gen g(101);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = g.index(2, 50);
    const auto dense = testing::random_binary_w(g, n, g.uniform(0.05, 0.6));
    const auto y = testing::random_nonconstant(g, n);
    const auto got = local_morans_i(y, WeightMatrix::from_dense(dense));
    const auto want = testing::lisa_oracle(y, dense);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 5.0,
          fmt("1000 cases, max |diff| %.2e (tol 1e-10), %.2f s (budget 5 s)", worst, secs)};
}

Outcome mie_identities() {
  testing::Gen g(102);
  bool identity = true;
  double sym = 0.0, affine = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = g.index(3, 50);
    const auto w = WeightMatrix::from_dense(testing::random_binary_w(g, n, g.uniform(0.05, 0.6)));
    const auto a = testing::random_nonconstant(g, n);
    const auto b = testing::random_nonconstant(g, n);
    identity = identity && mie(a, a, w) == 0.0;
    sym = std::max(sym, std::abs(mie(a, b, w) - mie(b, a, w)));
    const double scale = g.uniform(0.1, 10.0) * (g.coin(0.5) ? 1.0 : -1.0);
    const double shift = g.uniform(-100.0, 100.0);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = scale * a[i] + shift;
    const auto la = local_morans_i(a, w);
    const auto lt = local_morans_i(t, w);
    for (std::size_t i = 0; i < n; ++i) {
      affine = std::max(affine, std::abs(la[i] - lt[i]) / std::max(1.0, std::abs(la[i])));
    }
  }
  return {identity && sym <= 1e-9 && affine <= 1e-9,
          "100 cases, mie(y, y) == 0: " + yes_no(identity) +
              fmt(", symmetry max |diff| %.2e, affine max rel diff %.2e (tol 1e-9)", sym, affine)};
}

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (auto& v : t.data) v = rng.normal();
  return t;
}

Outcome gradient_checks() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(103);
  double worst = 0.0;
  std::size_t draws = 0;
  const Activation smooth[] = {Activation::tanh, Activation::sigmoid, Activation::linear};
  while (draws < 200) {
    std::vector<Network> nets;
    nets.emplace_back().add(make_dense(1 + rng.index(5), 1 + rng.index(5), rng));
    const std::size_t ch = 1 + rng.index(3), len = 2 + rng.index(6);
    const std::size_t kernel = 1 + rng.index(len);
    nets.emplace_back().add(make_conv1d(ch, 1 + rng.index(4), kernel, len, rng));
    nets.emplace_back().add(make_activation(smooth[rng.index(3)], 1 + rng.index(6)));
    // relu: inputs are pushed away from the kink below.
    nets.emplace_back().add(make_activation(Activation::relu, 1 + rng.index(6)));
    // G-shaped: conv over the neighbour slots, hidden dense, linear head.
    const std::size_t slots = 2 + rng.index(6), channels = 2 + rng.index(3);
    const std::size_t filters = 2 + rng.index(6);
    Network gen;
    gen.add(make_conv1d(channels, filters, slots, slots, rng))
        .add(make_activation(Activation::tanh, filters))
        .add(make_dense(filters, filters, rng))
        .add(make_activation(Activation::sigmoid, filters))
        .add(make_dense(filters, 1, rng))
        .add(make_activation(Activation::linear, 1));
    nets.push_back(std::move(gen));
    Network disc;
    disc.add(make_conv1d(channels, filters, 2, slots, rng))
        .add(make_activation(Activation::tanh, filters * (slots - 1)))
        .add(make_dense(filters * (slots - 1), filters, rng))
        .add(make_activation(Activation::tanh, filters))
        .add(make_dense(filters, 1, rng))
        .add(make_activation(Activation::sigmoid, 1));
    nets.push_back(std::move(disc));
    for (const auto& net : nets) {
      Tensor x = random_tensor({2, net.input_width()}, rng);
      for (auto& v : x.data) v += v >= 0 ? 0.05 : -0.05;
      const Tensor up = random_tensor({2, net.output_width()}, rng);
      worst = std::max(worst, check_gradients(net, x, up).max_relative_error);
      ++draws;
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 30.0,
          fmt("%.0f draws over dense/conv/activation and G/D-shaped nets, max rel err %.2e (tol 1e-4), %.2f s (budget 30 s)",
              static_cast<double>(draws), worst, secs)};
}

Outcome cv_invariants() {
  const auto d = gen_toy1(0);
  const auto graph = queen_graph(kToy1Side, kToy1Side);
  const auto plan = spatial_folds(d.coords, graph, 5);
  bool ok = plan.size() == 10;
  std::size_t violations = 0;
  std::vector<int> tested(d.size(), 0);
  for (const auto& f : plan.folds) {
    ok = ok && f.test.size() == 80;
    std::vector<char> in_test(d.size(), 0);
    for (auto i : f.test) in_test[i] = 1, ++tested[i];
    for (auto t : f.train) {
      for (auto j : graph.neighbors(t)) violations += in_test[j];
    }
  }
  const bool twice = std::all_of(tested.begin(), tested.end(), [](int c) { return c == 2; });
  return {ok && violations == 0 && twice,
          fmt("%.0f folds, all test sets of 80: ", static_cast<double>(plan.size())) + yes_no(ok) +
              fmt(", train-test neighbour violations %.0f, every point tested twice: ",
                  static_cast<double>(violations)) +
              yes_no(twice)};
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Outcome snapshot_selection() {
  testing::Gen g(105);
  bool synthetic = true;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::optional<double>> m(g.index(1, 40));
    for (auto& v : m) {
      if (!g.coin(0.1)) v = std::floor(g.uniform(0, 10));
    }
    if (std::none_of(m.begin(), m.end(), [](const auto& v) { return v.has_value(); })) m[0] = 0.0;
    std::size_t arg = m.size();
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] && (arg == m.size() || *m[k] < *m[arg])) arg = k;
    }
    synthetic = synthetic && select_snapshot(m) == arg;
  }
  const RunConfig rc = default_config(Profile::desk, "toy1");
  const auto d = gen_toy1(rc.seed);
  const auto model = train(d, all_rows(d.size()), queen_graph(kToy1Side, kToy1Side),
                           train_config(rc, rc.seed));
  const double chosen = *model.snapshots[model.selected].mie;
  bool min_ok = true;
  for (const auto& s : model.snapshots) min_ok = min_ok && s.mie && chosen <= *s.mie;
  const double first = *model.snapshots.front().mie;
  return {synthetic && min_ok && chosen < first,
          "1000 synthetic lists argmin: " +
              yes_no(synthetic) + "; Toy 1 desk run (tsteps 5000, snap 500, C 25): selected step " +
              std::to_string(model.snapshots[model.selected].step) +
              fmt(", selected MIE %.4g <= all: ", chosen) + yes_no(min_ok) +
              fmt(", first-snapshot MIE %.4g", first)};
}

struct DeskRun {
  RunConfig config;
  Problem problem;
  std::vector<TrainedSpaceGan> models;
  double train_seconds = 0.0;
};

DeskRun desk_run(std::uint64_t seed) {
  DeskRun r;
  r.config = default_config(Profile::desk, "toy1");
  r.config.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  r.problem = load_problem(r.config);
  r.models = train_folds(r.problem, r.config);
  r.train_seconds = seconds_since(t0);
  return r;
}

Outcome experiment1_direction(const DeskRun& run) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_experiment1(run.problem, run.config, run.models);
  const double secs = run.train_seconds + seconds_since(t0);
  const auto& gan = rep.method("spacegan");
  const auto& gp = rep.method("gp");
  return {gan.mean < gp.mean && secs < 1800.0,
          fmt("Toy 1, %.0f folds, seed 0: SpaceGAN mean test MIE %.4f (se %.4f) vs GP %.4f", 
              static_cast<double>(gan.per_fold.size()), gan.mean, gan.standard_error, gp.mean) +
              fmt(" (se %.4f), %.0f s (budget 1800 s)", gp.standard_error, secs)};
}

std::map<std::string, double> experiment2_means(const DeskRun& run) {
  const auto rep = run_experiment2(run.problem, run.config, run.models);
  std::map<std::string, double> out;
  for (const auto& m : rep.methods) out[m.name] = m.mean;
  return out;
}

bool ordering_holds(const std::map<std::string, double>& m) {
  const double a = m.at("spacegan_mie");
  return a <= m.at("spacegan_rmse") && a <= m.at("gp") && a <= m.at("spatial_boot");
}

std::string describe(const std::map<std::string, double>& m) {
  return fmt("spacegan_mie %.4f, spacegan_rmse %.4f, gp %.4f, spatial_boot %.4f",
             m.at("spacegan_mie"), m.at("spacegan_rmse"), m.at("gp"), m.at("spatial_boot"));
}

Outcome experiment2_direction(const DeskRun& run) {
  const auto first = experiment2_means(run);
  if (ordering_holds(first)) return {true, "Toy 1, B 20, seed 0, mean test RMSE: " + describe(first)};
  std::map<std::string, double> mean = first;
  for (std::uint64_t seed = 1; seed < 3; ++seed) {
    for (const auto& [k, v] : experiment2_means(desk_run(seed))) mean[k] += v;
  }
  for (auto& [k, v] : mean) v /= 3.0;
  return {ordering_holds(mean), "seed 0 ordering violated (" + describe(first) +
                                    "); mean over seeds 0-2: " + describe(mean)};
}

Outcome gp_correctness() {
  testing::Gen g(108);
  double worst_oracle = 0.0;
  int oracle_cases = 0;
  for (int trial = 0; trial < 200 && oracle_cases < 100; ++trial) {
    const double l = g.uniform(0.3, 2.0);
    Matrix x(3, 2);
    for (auto& v : x.data()) v = g.uniform(-1.5, 1.5);
    const std::vector<double> y{g.normal(), g.normal(), g.normal()};
    Matrix q(4, 2);
    for (auto& v : q.data()) v = g.uniform(-2, 2);
    GpModel gp;
    try {
      gp = gp_fit(x, y, l, 1e-6);
    } catch (const Error&) {
      continue;
    }
    if (gp.jitter != 1e-6) continue;
    ++oracle_cases;
    const auto k = [&](std::span<const double> a, std::span<const double> b) {
      return rbf_kernel(a, b, l);
    };
    std::vector<std::vector<double>> kk(3, std::vector<double>(3));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double dx = x(i, 0) - x(j, 0), dy = x(i, 1) - x(j, 1);
        kk[i][j] = std::exp(-(dx * dx + dy * dy) / (2 * l * l)) + (i == j ? 1e-6 : 0.0);
      }
    }
    const auto kinv = testing::dense_inverse(kk);
    const auto p = gp_predict(gp, q);
    for (std::size_t a = 0; a < 4; ++a) {
      double mean = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) mean += k(q.row(a), x.row(i)) * kinv[i][j] * y[j];
      }
      worst_oracle = std::max(worst_oracle, std::abs(p.mean(static_cast<int>(a)) - mean));
      for (std::size_t b = 0; b < 4; ++b) {
        double cov = k(q.row(a), q.row(b));
        for (std::size_t i = 0; i < 3; ++i) {
          for (std::size_t j = 0; j < 3; ++j) cov -= k(q.row(a), x.row(i)) * kinv[i][j] * k(x.row(j), q.row(b));
        }
        worst_oracle = std::max(
            worst_oracle, std::abs(p.covariance(static_cast<int>(a), static_cast<int>(b)) - cov));
      }
    }
  }

  Matrix x(30, 2);
  for (auto& v : x.data()) v = g.uniform(-3, 3);
  std::vector<double> y(30);
  for (std::size_t i = 0; i < 30; ++i) y[i] = std::sin(x(i, 0)) * std::cos(x(i, 1));
  const auto gp = gp_fit(x, y, 1.0, 1e-6);
  const auto at_train = gp_predict(gp, x);
  double interp = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    interp = std::max(interp, std::abs(at_train.mean(static_cast<int>(i)) - y[i]));
  }

  Matrix q(60, 2);
  for (auto& v : q.data()) v = g.uniform(-4, 4);
  const auto post = gp_predict(gp, q);
  const std::size_t b = 2000;
  const auto draws = gp_sample_posterior(gp, q, b, 7);
  std::size_t within = 0;
  for (std::size_t i = 0; i < 60; ++i) {
    double m = 0.0;
    for (const auto& d : draws) m += d[i];
    m /= static_cast<double>(b);
    const int ii = static_cast<int>(i);
    const double sd = std::sqrt(std::max(post.covariance(ii, ii), 0.0));
    if (std::abs(m - post.mean(ii)) <= 4.0 * sd / std::sqrt(static_cast<double>(b)) + 1e-12) {
      ++within;
    }
  }
  const bool ok = oracle_cases >= 50 && worst_oracle <= 1e-8 && interp <= 1e-3 && within >= 57;
  return {ok, fmt("3-point oracle over %.0f cases max |diff| %.2e (tol 1e-8); interpolation max |diff| %.2e (tol 1e-3); ",
                  static_cast<double>(oracle_cases), worst_oracle, interp) +
                  fmt("MC mean within 4sd/sqrt(2000) at %.0f/60 points (need 57)",
                      static_cast<double>(within))};
}

struct Moments {
  double min, max, mean, sd;
};

Moments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()), mean,
          std::sqrt(ss / (n - 1.0))};
}

bool toy_matches(const SpatialDataset& d, std::size_t n, double lo, double hi, std::string& note) {
  bool ok = d.size() == n;
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> c;
    for (const auto& p : d.coords) c.push_back(axis == 0 ? p.c1 : p.c2);
    const auto m = moments(c);
    ok = ok && m.min == lo && m.max == hi;
  }
  const auto y = moments(d.target);
  ok = ok && std::abs(y.mean) <= 1e-9 && std::abs(y.sd - 1.0) <= 1e-9;
  note += fmt("n %.0f, extents [%.2f, %.2f], y mean %.1e", static_cast<double>(d.size()),
              lo, hi, y.mean) +
          fmt(" sd-1 %.1e", y.sd - 1.0);
  return ok;
}

Outcome dataset_fidelity() {
  std::string note = "Toy 1: ";
  bool ok = toy_matches(gen_toy1(0), 400, 2.5, 97.5, note);
  note += "; Toy 2: ";
  ok = toy_matches(gen_toy2(0), 841, 1.75, 99.75, note) && ok;
  const char* path = std::getenv("SPACEGAN_CALIFORNIA_CSV");
  if (path == nullptr || !fs::exists(path)) {
    note += "; California: not checked, reference file absent (set SPACEGAN_CALIFORNIA_CSV)";
    return {ok, note, true};
  }
  const auto d = load_california(path);
  ok = ok && d.size() == 20433;
  note += "; California: n " + std::to_string(d.size()) + " (want 20433)";
  return {ok, note};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

Outcome cli_determinism(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / "spacegan_acceptance_cli";
  fs::remove_all(base);
  const std::string small = " --tsteps 60 --snap 30 --samples-c 3 --ensemble-b 2 --max-folds 2";
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-toy1", "gen-data toy1 --seed 3"},
      {"gen-toy2", "gen-data toy2 --seed 3"},
      {"train", "train --seed 3 --tsteps 60 --snap 30 --samples-c 3"},
      {"experiment1", "experiment1 --seed 3" + small},
      {"experiment2", "experiment2 --seed 3" + small},
  };
  std::string detail;
  bool ok = true;
  for (const auto& [name, args] : commands) {
    std::map<std::string, std::string> runs[2];
    for (int r = 0; r < 2; ++r) {
      const fs::path dir = base / (name + "_" + std::to_string(r));
      const std::string cmd =
          "\"" + cli + "\" " + args + " --out \"" + dir.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0 || !fs::exists(dir)) {
        ok = false;
        detail += name + " failed to run; ";
        continue;
      }
      runs[r] = tree_contents(dir);
    }
    const bool same = !runs[0].empty() && runs[0] == runs[1];
    ok = ok && same;
    detail += name + " (" + std::to_string(runs[0].size()) + " files) " +
              (same ? "identical" : "DIFFER") + "; ";
  }
  fs::remove_all(base);
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

void report(int id, const char* title, const std::function<Outcome()>& check, int& failures) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  const char* status = !o.pass ? "FAIL" : o.partial ? "SKIP" : "PASS";
  std::printf("[%s] %2d %s: %s\n", status, id, title, o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-spacegan-cli>\n", argv[0]);
    return 2;
  }
  int failures = 0;
  report(1, "Moran's I oracle equivalence", lisa_oracle_equivalence, failures);
  report(2, "MIE identities", mie_identities, failures);
  report(3, "gradient checks", gradient_checks, failures);
  report(4, "spatial CV invariants", cv_invariants, failures);
  report(5, "snapshot selection", snapshot_selection, failures);
  std::optional<DeskRun> desk;
  const auto shared = [&]() -> const DeskRun& {
    if (!desk) desk = desk_run(0);
    return *desk;
  };
  report(6, "experiment 1 direction", [&] { return experiment1_direction(shared()); }, failures);
  report(7, "experiment 2 direction", [&] { return experiment2_direction(shared()); }, failures);
  report(8, "GP correctness", gp_correctness, failures);
  report(9, "dataset fidelity", dataset_fidelity, failures);
  report(10, "CLI determinism", [&] { return cli_determinism(argv[1]); }, failures);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
