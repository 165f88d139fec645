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

#include "spacegan/spatial_stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "spacegan/error.hpp"

namespace spacegan {

namespace {

void check_finite(std::span<const double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      fail(Errc::invalid_argument, "non-finite value at index " + std::to_string(i));
    }
  }
}

double lisa_at(std::span<const double> y, const WeightMatrix& w, std::size_t i, double mean,
               double total_ss, double n_minus_1) {
  const double dev = y[i] - mean;
  const double denom = total_ss - dev * dev;
  double lag = 0.0;
  for (std::size_t j : w.row(i)) {
    if (j != i) lag += y[j] - mean;
  }
  return n_minus_1 * dev / denom * lag;
}

}  // namespace

std::vector<double> local_morans_i(std::span<const double> y, const WeightMatrix& w, Exec exec) {
  const std::size_t n = y.size();
  if (n != w.size()) {
    fail(Errc::shape_mismatch, "y has " + std::to_string(n) + " values, w is " +
                                   std::to_string(w.size()) + "x" + std::to_string(w.size()));
  }
  if (n < 2) fail(Errc::invalid_dimension, "local Moran's I needs n >= 2");
  check_finite(y);

  double sum = 0.0;
  for (double v : y) sum += v;
  const double mean = sum / static_cast<double>(n);
  double total_ss = 0.0;
  for (double v : y) total_ss += (v - mean) * (v - mean);

  // A zero leave-one-out denominator implies every other value equals the
  // mean, hence so does y_i: the vector is constant. Guard relative to the
  // spread so rounding residue in total_ss is not mistaken for signal.
  double max_dev = 0.0;
  for (double v : y) max_dev = std::max(max_dev, std::abs(v - mean));
  if (total_ss == 0.0 || max_dev <= 1e-13 * std::abs(mean)) {
    fail(Errc::degenerate_input, "constant vector: zero Moran's I denominator");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = y[i] - mean;
    if (total_ss - dev * dev <= 0.0) {
      fail(Errc::degenerate_input, "zero Moran's I denominator at index " + std::to_string(i));
    }
  }

  const double n_minus_1 = static_cast<double>(n - 1);
  std::vector<double> out(n);
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      out[u] = lisa_at(y, w, u, mean, total_ss, n_minus_1);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = lisa_at(y, w, i, mean, total_ss, n_minus_1);
  }
  return out;
}

double mie_against(std::span<const double> lisa_real, std::span<const double> y_fake,
                   const WeightMatrix& w) {
  if (lisa_real.size() != y_fake.size()) {
    fail(Errc::shape_mismatch, "real and generated vectors differ in length");
  }
  const auto lisa_fake = local_morans_i(y_fake, w, Exec::serial);
  double total = 0.0;
  for (std::size_t i = 0; i < lisa_real.size(); ++i) total += std::abs(lisa_real[i] - lisa_fake[i]);
  return total;
}

double mie(std::span<const double> y_real, std::span<const double> y_fake, const WeightMatrix& w) {
  if (y_real.size() != y_fake.size()) {
    fail(Errc::shape_mismatch, "real and generated vectors differ in length");
  }
  const auto lisa_real = local_morans_i(y_real, w, Exec::serial);
  return mie_against(lisa_real, y_fake, w);
}

double rmse(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) fail(Errc::shape_mismatch, "rmse: length mismatch");
  if (y.empty()) fail(Errc::shape_mismatch, "rmse: empty input");
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) ss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  return std::sqrt(ss / static_cast<double>(y.size()));
}

Scaler scaler_fit(const Matrix& data) {
  if (data.rows() < 2) fail(Errc::invalid_dimension, "scaler needs at least 2 rows");
  const std::size_t n = data.rows();
  Scaler s;
  s.mean.assign(data.cols(), 0.0);
  s.std.assign(data.cols(), 0.0);
  for (std::size_t c = 0; c < data.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += data(r, c);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (data(r, c) - mean) * (data(r, c) - mean);
    s.mean[c] = mean;
    s.std[c] = std::sqrt(ss / static_cast<double>(n));
  }
  return s;
}

Scaler scaler_fit(std::span<const double> column) {
  Matrix m(column.size(), 1);
  for (std::size_t i = 0; i < column.size(); ++i) m(i, 0) = column[i];
  return scaler_fit(m);
}

namespace {

void require_usable(const Scaler& scaler, std::size_t cols) {
  if (scaler.width() != cols) fail(Errc::shape_mismatch, "scaler width does not match data");
  for (std::size_t c = 0; c < cols; ++c) {
    if (!(scaler.std[c] > 0.0)) {
      fail(Errc::degenerate_column, "column " + std::to_string(c) + " has zero standard deviation");
    }
  }
}

}  // namespace

Matrix scaler_transform(const Matrix& data, const Scaler& scaler) {
  require_usable(scaler, data.cols());
  Matrix out(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) out(r, c) = scaler.transform(data(r, c), c);
  }
  return out;
}

Matrix scaler_inverse(const Matrix& data, const Scaler& scaler) {
  if (scaler.width() != data.cols()) fail(Errc::shape_mismatch, "scaler width does not match data");
  Matrix out(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) out(r, c) = scaler.inverse(data(r, c), c);
  }
  return out;
}

std::vector<double> scaler_transform(std::span<const double> column, const Scaler& scaler) {
  require_usable(scaler, 1);
  std::vector<double> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = scaler.transform(column[i], 0);
  return out;
}

std::vector<double> scaler_inverse(std::span<const double> column, const Scaler& scaler) {
  if (scaler.width() != 1) fail(Errc::shape_mismatch, "expected a single-column scaler");
  std::vector<double> out(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = scaler.inverse(column[i], 0);
  return out;
}

std::vector<double> standardize(std::span<const double> values) {
  return scaler_transform(values, scaler_fit(values));
}

void write_lisa_csv(std::ostream& out, std::span<const std::size_t> indices,
                    std::span<const Point> coords, std::span<const double> y,
                    std::span<const double> lisa, std::span<const NamedColumn> extra) {
  if (y.size() != indices.size() || lisa.size() != indices.size()) {
    fail(Errc::shape_mismatch, "LISA export columns differ in length");
  }
  for (const auto& col : extra) {
    if (col.values.size() != indices.size()) fail(Errc::shape_mismatch, "extra column length");
  }
  out << "index,c1,c2,y,I";
  for (const auto& col : extra) out << ',' << col.name;
  out << '\n' << std::setprecision(17);
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const Point& p = coords[indices[t]];
    out << indices[t] << ',' << p.c1 << ',' << p.c2 << ',' << y[t] << ',' << lisa[t];
    for (const auto& col : extra) out << ',' << col.values[t];
    out << '\n';
  }
}

}  // namespace spacegan
