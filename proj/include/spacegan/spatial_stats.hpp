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

#ifndef SPACEGAN_SPATIAL_STATS_HPP_
#define SPACEGAN_SPATIAL_STATS_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spacegan/exec.hpp"
#include "spacegan/geometry.hpp"
#include "spacegan/matrix.hpp"

namespace spacegan {

// Local Moran's I per location:
//
//   I_i = (n-1) (y_i - ybar) / sum_{j!=i} (y_j - ybar)^2 * sum_{j!=i} w_ij (y_j - ybar)
//
// with ybar the mean over all n values. Throws degenerate_input when any
// denominator is zero (which for n >= 2 means y is constant) and
// shape_mismatch when |y| != |w|.
std::vector<double> local_morans_i(std::span<const double> y, const WeightMatrix& w,
                                   Exec exec = Exec::parallel);

// Sum over locations of |I(real)_i - I(fake)_i|. Named a "mean" error
// because it is averaged over generator draws by the caller.
double mie(std::span<const double> y_real, std::span<const double> y_fake,
           const WeightMatrix& w);

// Same, with the real LISA vector precomputed.
double mie_against(std::span<const double> lisa_real, std::span<const double> y_fake,
                   const WeightMatrix& w);

// sqrt(mean((y - yhat)^2)).
double rmse(std::span<const double> y, std::span<const double> yhat);

// Column-wise z-score with the population standard deviation.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t width() const { return mean.size(); }
  double transform(double value, std::size_t column) const {
    return (value - mean[column]) / std[column];
  }
  double inverse(double value, std::size_t column) const {
    return value * std[column] + mean[column];
  }
};

// Requires >= 2 rows. Zero-std columns are allowed here and rejected by
// scaler_transform.
Scaler scaler_fit(const Matrix& data);
Scaler scaler_fit(std::span<const double> column);
Matrix scaler_transform(const Matrix& data, const Scaler& scaler);
Matrix scaler_inverse(const Matrix& data, const Scaler& scaler);
std::vector<double> scaler_transform(std::span<const double> column, const Scaler& scaler);
std::vector<double> scaler_inverse(std::span<const double> column, const Scaler& scaler);

// In-place standardisation of one vector (population std); throws
// degenerate_column when constant.
std::vector<double> standardize(std::span<const double> values);

// CSV with columns index,c1,c2,y,I. `extra` adds (name, values) column pairs
// after I, each values vector aligned with `indices`.
struct NamedColumn {
  std::string name;
  std::vector<double> values;
};
void write_lisa_csv(std::ostream& out, std::span<const std::size_t> indices,
                    std::span<const Point> coords, std::span<const double> y,
                    std::span<const double> lisa, std::span<const NamedColumn> extra = {});

}  // namespace spacegan

#endif  // SPACEGAN_SPATIAL_STATS_HPP_
