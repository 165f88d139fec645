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

#include "spacegan/gp.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "spacegan/error.hpp"
#include "spacegan/rng.hpp"

namespace spacegan {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double lengthscale) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
  return std::exp(-d2 / (2.0 * lengthscale * lengthscale));
}

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double l) {
  Eigen::MatrixXd k(a.rows(), b.rows());
  const double scale = -1.0 / (2.0 * l * l);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = std::exp(scale * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return k;
}

}  // namespace

GpModel gp_fit(const Matrix& inputs, std::span<const double> targets, double lengthscale,
               double jitter) {
  if (inputs.rows() != targets.size()) fail(Errc::shape_mismatch, "GP inputs and targets differ");
  if (inputs.rows() < 2) fail(Errc::invalid_dimension, "GP needs at least two training points");
  if (!(lengthscale > 0.0)) fail(Errc::invalid_argument, "lengthscale must be positive");

  GpModel model;
  model.inputs = to_eigen(inputs);
  model.targets = Eigen::Map<const Eigen::VectorXd>(targets.data(),
                                                    static_cast<Eigen::Index>(targets.size()));
  model.lengthscale = lengthscale;
  const Eigen::MatrixXd k = cross_kernel(model.inputs, model.inputs, lengthscale);
  const auto n = k.rows();
  for (double j = jitter; j <= 1e-2 * (1.0 + 1e-9); j *= 10.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(k + j * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() != Eigen::Success) continue;
    model.jitter = j;
    model.lower = llt.matrixL();
    model.alpha = llt.solve(model.targets);
    return model;
  }
  fail(Errc::ill_conditioned, "kernel matrix not positive definite with jitter up to 1e-2");
}

GpPrediction gp_predict(const GpModel& model, const Matrix& query) {
  GpPrediction out;
  if (query.rows() == 0) {
    out.mean = Eigen::VectorXd(0);
    out.covariance = Eigen::MatrixXd(0, 0);
    return out;
  }
  if (static_cast<Eigen::Index>(query.cols()) != model.inputs.cols()) {
    fail(Errc::shape_mismatch, "query dimension differs from training inputs");
  }
  const Eigen::MatrixXd q = to_eigen(query);
  const Eigen::MatrixXd k_star = cross_kernel(model.inputs, q, model.lengthscale);  // n x q
  out.mean = k_star.transpose() * model.alpha;
  const Eigen::MatrixXd v = model.lower.triangularView<Eigen::Lower>().solve(k_star);
  out.covariance = cross_kernel(q, q, model.lengthscale) - v.transpose() * v;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

std::vector<std::vector<double>> sample_gaussian(const GpPrediction& posterior, std::size_t draws,
                                                 std::uint64_t seed) {
  const auto q = posterior.mean.size();
  std::vector<std::vector<double>> out(draws, std::vector<double>(static_cast<std::size_t>(q)));
  if (q == 0 || draws == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(posterior.covariance);
  if (eig.info() != Eigen::Success) fail(Errc::ill_conditioned, "posterior covariance eigensolve failed");
  const Eigen::VectorXd values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (values.minCoeff() < -1e-6 * scale) {
    fail(Errc::ill_conditioned, "posterior covariance is not positive semidefinite");
  }
  const Eigen::MatrixXd root =
      eig.eigenvectors() * values.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  for (std::size_t d = 0; d < draws; ++d) {
    Rng rng = Rng::stream(seed, d);
    Eigen::VectorXd eps(q);
    for (Eigen::Index k = 0; k < q; ++k) eps(k) = rng.normal();
    const Eigen::VectorXd x = posterior.mean + root * eps;
    for (Eigen::Index k = 0; k < q; ++k) out[d][static_cast<std::size_t>(k)] = x(k);
  }
  return out;
}

std::vector<std::vector<double>> gp_sample_posterior(const GpModel& model, const Matrix& query,
                                                     std::size_t draws, std::uint64_t seed) {
  return sample_gaussian(gp_predict(model, query), draws, seed);
}

void write_posterior_csv(std::ostream& out, std::span<const std::size_t> indices,
                         const Matrix& query, const GpPrediction& posterior) {
  if (query.cols() != 2 || indices.size() != query.rows()) {
    fail(Errc::shape_mismatch, "posterior export expects 2-d queries aligned with indices");
  }
  out << "index,c1,c2,mean,std\n" << std::setprecision(17);
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const auto k = static_cast<Eigen::Index>(t);
    out << indices[t] << ',' << query(t, 0) << ',' << query(t, 1) << ',' << posterior.mean(k)
        << ',' << std::sqrt(std::max(0.0, posterior.covariance(k, k))) << '\n';
  }
}

}  // namespace spacegan
