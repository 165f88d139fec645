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

#ifndef SPACEGAN_NEURAL_HPP_
#define SPACEGAN_NEURAL_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "spacegan/rng.hpp"

namespace spacegan {

// Row-major double tensor. Networks consume 2-d [batch, width] tensors.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims, double fill = 0.0);

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const;
  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool operator==(const Tensor&) const = default;
};

enum class Activation { relu, tanh, sigmoid, linear };
const char* to_string(Activation fn);
Activation activation_from_string(const std::string& name);

// y = W x + b, W is [out, in].
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  Tensor weight;
  Tensor bias;
};

// Valid (unpadded) 1-d convolution over a [length, in_channels] sequence
// flattened position-major. Weight is [filters, kernel, in_channels]; output
// is [output_length, filters] flattened position-major. A kernel equal to
// the sequence length collapses the sequence in one stride.
struct Conv1d {
  std::size_t in_channels = 0;
  std::size_t filters = 0;
  std::size_t kernel = 0;
  std::size_t length = 0;
  Tensor weight;
  Tensor bias;

  std::size_t output_length() const { return length - kernel + 1; }
};

struct ActivationLayer {
  Activation fn = Activation::linear;
  std::size_t width = 0;
};

using Layer = std::variant<Dense, Conv1d, ActivationLayer>;

std::size_t input_width(const Layer& layer);
std::size_t output_width(const Layer& layer);

// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
Layer make_dense(std::size_t in, std::size_t out, Rng& rng);
Layer make_conv1d(std::size_t in_channels, std::size_t filters, std::size_t kernel,
                  std::size_t length, Rng& rng);
Layer make_activation(Activation fn, std::size_t width);

struct Gradients {
  std::vector<Tensor> parameters;  // same order as Network::parameters()
  Tensor input;                    // d loss / d input batch
};

enum class Direction { ascend, descend };

struct SgdConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 100;
};

class Network {
 public:
  // Throws shape_mismatch when the layer does not compose with the last one.
  Network& add(Layer layer);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t input_width() const;
  std::size_t output_width() const;
  std::size_t parameter_count() const;

  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;

  // Evaluates and keeps every intermediate activation for backward().
  // Throws numeric_fault on any non-finite activation.
  Tensor forward(const Tensor& batch);
  // Cache-free evaluation; safe to call concurrently on a shared network.
  Tensor infer(const Tensor& batch) const;

  // Gradients of sum(output_grad * output) w.r.t. parameters and input, at
  // the last forward() batch. Throws missing_cache without one.
  Gradients backward(const Tensor& output_grad) const;

  bool has_cache() const { return !cache_.empty(); }
  void clear_cache() { cache_.clear(); }

 private:
  std::vector<Layer> layers_;
  std::vector<Tensor> cache_;  // cache_[l] is the input of layer l; back() is the output
};

// theta <- theta +/- lr * g.
void sgd_step(Network& net, const Gradients& grads, const SgdConfig& config, Direction direction);

// Deep copy without the activation cache.
Network clone_snapshot(const Network& net);

// Text checkpoint: a header line, then per layer its kind and shape followed
// by row-major parameter values at round-trip precision.
void save_checkpoint(std::ostream& out, const Network& net);
Network load_checkpoint(std::istream& in);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
};

// Compares backward() against central finite differences of
// L = sum(upstream * infer(input)) for every parameter and input entry.
// Relative error is |analytic - numeric| / max(|analytic|, |numeric|, floor).
GradientCheck check_gradients(const Network& net, const Tensor& input, const Tensor& upstream,
                              double step = 1e-5, double floor = 1e-6);

}  // namespace spacegan

#endif  // SPACEGAN_NEURAL_HPP_
