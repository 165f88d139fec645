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

#ifndef SPACEGAN_GP_HPP_
#define SPACEGAN_GP_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spacegan/matrix.hpp"

namespace spacegan {

// Exact GP regression with k(a, b) = exp(-|a - b|^2 / (2 l^2)), unit signal
// variance and diagonal jitter.
struct GpModel {
  Eigen::MatrixXd inputs;  // n x d
  Eigen::VectorXd targets;
  double lengthscale = 1.0;
  double jitter = 1e-6;      // jitter actually used after escalation
  Eigen::MatrixXd lower;     // Cholesky factor of K + jitter I
  Eigen::VectorXd alpha;     // (K + jitter I)^-1 y
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double lengthscale);

// Jitter escalates x10 from `jitter` up to 1e-2; ill_conditioned beyond.
GpModel gp_fit(const Matrix& inputs, std::span<const double> targets, double lengthscale = 1.0,
               double jitter = 1e-6);

struct GpPrediction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

GpPrediction gp_predict(const GpModel& model, const Matrix& query);

// `draws` posterior samples at `query`, one vector per draw. Covariance is
// factored through its eigendecomposition with negative rounding residue
// clamped to zero, so a zero covariance yields draws equal to the mean.
std::vector<std::vector<double>> gp_sample_posterior(const GpModel& model, const Matrix& query,
                                                     std::size_t draws, std::uint64_t seed);

// Same, from an already computed posterior.
std::vector<std::vector<double>> sample_gaussian(const GpPrediction& posterior, std::size_t draws,
                                                 std::uint64_t seed);

// CSV columns: index,c1,c2,mean,std for a 2-d query.
void write_posterior_csv(std::ostream& out, std::span<const std::size_t> indices,
                         const Matrix& query, const GpPrediction& posterior);

}  // namespace spacegan

#endif  // SPACEGAN_GP_HPP_
