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

#include "spacegan/neural.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "spacegan/error.hpp"

namespace spacegan {

Tensor::Tensor(std::vector<std::size_t> dims, double fill) : shape(std::move(dims)) {
  std::size_t count = 1;
  for (std::size_t d : shape) count *= d;
  data.assign(count, fill);
}

std::size_t Tensor::cols() const {
  std::size_t count = 1;
  for (std::size_t d = 1; d < shape.size(); ++d) count *= shape[d];
  return count;
}

const char* to_string(Activation fn) {
  switch (fn) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::linear: return "linear";
  }
  return "?";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "linear") return Activation::linear;
  fail(Errc::invalid_argument, "unknown activation '" + name + "'");
}

std::size_t input_width(const Layer& layer) {
  return std::visit(
      [](const auto& l) -> std::size_t {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Dense>) return l.in;
        else if constexpr (std::is_same_v<T, Conv1d>) return l.length * l.in_channels;
        else return l.width;
      },
      layer);
}

std::size_t output_width(const Layer& layer) {
  return std::visit(
      [](const auto& l) -> std::size_t {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Dense>) return l.out;
        else if constexpr (std::is_same_v<T, Conv1d>) return l.output_length() * l.filters;
        else return l.width;
      },
      layer);
}

namespace {

void fill_uniform(Tensor& t, double bound, Rng& rng) {
  for (double& v : t.data) v = rng.uniform(-bound, bound);
}

}  // namespace

Layer make_dense(std::size_t in, std::size_t out, Rng& rng) {
  if (in == 0 || out == 0) fail(Errc::invalid_dimension, "dense layer needs positive sizes");
  Dense d;
  d.in = in;
  d.out = out;
  d.weight = Tensor({out, in});
  d.bias = Tensor({out});
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  fill_uniform(d.weight, bound, rng);
  fill_uniform(d.bias, bound, rng);
  return d;
}

Layer make_conv1d(std::size_t in_channels, std::size_t filters, std::size_t kernel,
                  std::size_t length, Rng& rng) {
  if (in_channels == 0 || filters == 0 || kernel == 0) {
    fail(Errc::invalid_dimension, "conv1d needs positive channels, filters and kernel");
  }
  if (kernel > length) fail(Errc::invalid_dimension, "conv1d kernel longer than sequence");
  Conv1d c;
  c.in_channels = in_channels;
  c.filters = filters;
  c.kernel = kernel;
  c.length = length;
  c.weight = Tensor({filters, kernel, in_channels});
  c.bias = Tensor({filters});
  const double bound = 1.0 / std::sqrt(static_cast<double>(kernel * in_channels));
  fill_uniform(c.weight, bound, rng);
  fill_uniform(c.bias, bound, rng);
  return c;
}

Layer make_activation(Activation fn, std::size_t width) {
  if (width == 0) fail(Errc::invalid_dimension, "activation width must be positive");
  return ActivationLayer{fn, width};
}

namespace {

void require_finite(const Tensor& t, std::size_t layer_index) {
  for (double v : t.data) {
    if (!std::isfinite(v)) {
      fail(Errc::numeric_fault, "non-finite activation after layer " + std::to_string(layer_index));
    }
  }
}

double activate(Activation fn, double x) {
  switch (fn) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::linear: return x;
  }
  return x;
}

// Derivative expressed through the layer input x and output y.
double activate_grad(Activation fn, double x, double y) {
  switch (fn) {
    case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: return 1.0 - y * y;
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::linear: return 1.0;
  }
  return 1.0;
}

Tensor layer_forward(const Layer& layer, const Tensor& in) {
  const std::size_t batch = in.rows();
  Tensor out({batch, output_width(layer)});
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, Dense>) {
          for (std::size_t b = 0; b < batch; ++b) {
            const double* x = in.data.data() + b * l.in;
            double* y = out.data.data() + b * l.out;
            for (std::size_t o = 0; o < l.out; ++o) {
              const double* w = l.weight.data.data() + o * l.in;
              double acc = l.bias.data[o];
              for (std::size_t i = 0; i < l.in; ++i) acc += w[i] * x[i];
              y[o] = acc;
            }
          }
        } else if constexpr (std::is_same_v<T, Conv1d>) {
          const std::size_t window = l.kernel * l.in_channels;
          const std::size_t positions = l.output_length();
          const std::size_t in_w = l.length * l.in_channels;
          for (std::size_t b = 0; b < batch; ++b) {
            const double* x = in.data.data() + b * in_w;
            double* y = out.data.data() + b * positions * l.filters;
            for (std::size_t p = 0; p < positions; ++p) {
              const double* xw = x + p * l.in_channels;
              for (std::size_t f = 0; f < l.filters; ++f) {
                const double* w = l.weight.data.data() + f * window;
                double acc = l.bias.data[f];
                for (std::size_t t = 0; t < window; ++t) acc += w[t] * xw[t];
                y[p * l.filters + f] = acc;
              }
            }
          }
        } else {
          for (std::size_t k = 0; k < in.size(); ++k) out.data[k] = activate(l.fn, in.data[k]);
        }
      },
      layer);
  return out;
}

void check_input(const Network& net, const Tensor& batch) {
  if (net.layers().empty()) fail(Errc::invalid_argument, "network has no layers");
  if (batch.shape.size() != 2 || batch.cols() != net.input_width()) {
    fail(Errc::shape_mismatch, "input width " + std::to_string(batch.cols()) +
                                   " does not match network input " +
                                   std::to_string(net.input_width()));
  }
}

}  // namespace

Network& Network::add(Layer layer) {
  if (!layers_.empty() && spacegan::output_width(layers_.back()) != spacegan::input_width(layer)) {
    fail(Errc::shape_mismatch, "layer input " + std::to_string(spacegan::input_width(layer)) +
                                   " does not match previous output " +
                                   std::to_string(spacegan::output_width(layers_.back())));
  }
  layers_.push_back(std::move(layer));
  cache_.clear();
  return *this;
}

std::size_t Network::input_width() const {
  return layers_.empty() ? 0 : spacegan::input_width(layers_.front());
}

std::size_t Network::output_width() const {
  return layers_.empty() ? 0 : spacegan::output_width(layers_.back());
}

std::size_t Network::parameter_count() const {
  std::size_t count = 0;
  for (const Tensor* t : parameters()) count += t->size();
  return count;
}

std::vector<Tensor*> Network::parameters() {
  std::vector<Tensor*> out;
  for (auto& layer : layers_) {
    if (auto* d = std::get_if<Dense>(&layer)) {
      out.push_back(&d->weight);
      out.push_back(&d->bias);
    } else if (auto* c = std::get_if<Conv1d>(&layer)) {
      out.push_back(&c->weight);
      out.push_back(&c->bias);
    }
  }
  return out;
}

std::vector<const Tensor*> Network::parameters() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<Network*>(this)->parameters()) out.push_back(t);
  return out;
}

Tensor Network::forward(const Tensor& batch) {
  check_input(*this, batch);
  cache_.clear();
  cache_.reserve(layers_.size() + 1);
  cache_.push_back(batch);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    cache_.push_back(layer_forward(layers_[l], cache_.back()));
    require_finite(cache_.back(), l);
  }
  return cache_.back();
}

Tensor Network::infer(const Tensor& batch) const {
  check_input(*this, batch);
  Tensor current = batch;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    current = layer_forward(layers_[l], current);
    require_finite(current, l);
  }
  return current;
}

Gradients Network::backward(const Tensor& output_grad) const {
  if (cache_.size() != layers_.size() + 1) fail(Errc::missing_cache, "backward before forward");
  if (output_grad.shape != cache_.back().shape) {
    fail(Errc::shape_mismatch, "loss gradient shape does not match network output");
  }
  const std::size_t batch = output_grad.rows();
  Gradients grads;
  std::vector<Tensor> reversed;  // parameter grads collected back to front
  Tensor g = output_grad;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Tensor& in = cache_[l];
    const Tensor& out = cache_[l + 1];
    Tensor gin({batch, spacegan::input_width(layers_[l])});
    std::visit(
        [&](const auto& layer) {
          using T = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<T, Dense>) {
            Tensor gw(layer.weight.shape), gb(layer.bias.shape);
            for (std::size_t b = 0; b < batch; ++b) {
              const double* x = in.data.data() + b * layer.in;
              const double* go = g.data.data() + b * layer.out;
              double* gx = gin.data.data() + b * layer.in;
              for (std::size_t o = 0; o < layer.out; ++o) {
                const double d = go[o];
                if (d == 0.0) continue;
                gb.data[o] += d;
                double* gwr = gw.data.data() + o * layer.in;
                const double* w = layer.weight.data.data() + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) {
                  gwr[i] += d * x[i];
                  gx[i] += d * w[i];
                }
              }
            }
            reversed.push_back(std::move(gb));
            reversed.push_back(std::move(gw));
          } else if constexpr (std::is_same_v<T, Conv1d>) {
            Tensor gw(layer.weight.shape), gb(layer.bias.shape);
            const std::size_t window = layer.kernel * layer.in_channels;
            const std::size_t positions = layer.output_length();
            const std::size_t in_w = layer.length * layer.in_channels;
            for (std::size_t b = 0; b < batch; ++b) {
              const double* x = in.data.data() + b * in_w;
              double* gx = gin.data.data() + b * in_w;
              const double* go = g.data.data() + b * positions * layer.filters;
              for (std::size_t p = 0; p < positions; ++p) {
                const double* xw = x + p * layer.in_channels;
                double* gxw = gx + p * layer.in_channels;
                for (std::size_t f = 0; f < layer.filters; ++f) {
                  const double d = go[p * layer.filters + f];
                  if (d == 0.0) continue;
                  gb.data[f] += d;
                  double* gwf = gw.data.data() + f * window;
                  const double* w = layer.weight.data.data() + f * window;
                  for (std::size_t t = 0; t < window; ++t) {
                    gwf[t] += d * xw[t];
                    gxw[t] += d * w[t];
                  }
                }
              }
            }
            reversed.push_back(std::move(gb));
            reversed.push_back(std::move(gw));
          } else {
            for (std::size_t k = 0; k < g.size(); ++k) {
              gin.data[k] = g.data[k] * activate_grad(layer.fn, in.data[k], out.data[k]);
            }
          }
        },
        layers_[l]);
    g = std::move(gin);
  }
  grads.parameters.assign(std::make_move_iterator(reversed.rbegin()),
                          std::make_move_iterator(reversed.rend()));
  grads.input = std::move(g);
  return grads;
}

void sgd_step(Network& net, const Gradients& grads, const SgdConfig& config, Direction direction) {
  if (!(config.learning_rate > 0.0)) fail(Errc::invalid_argument, "learning rate must be positive");
  auto params = net.parameters();
  if (params.size() != grads.parameters.size()) {
    fail(Errc::shape_mismatch, "gradient count does not match parameter count");
  }
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (params[p]->shape != grads.parameters[p].shape) {
      fail(Errc::shape_mismatch, "gradient shape does not match parameter " + std::to_string(p));
    }
  }
  const double scale = direction == Direction::ascend ? config.learning_rate : -config.learning_rate;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& theta = params[p]->data;
    const auto& g = grads.parameters[p].data;
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] += scale * g[k];
  }
}

Network clone_snapshot(const Network& net) {
  Network copy = net;
  copy.clear_cache();
  return copy;
}

namespace {

void write_values(std::ostream& out, const char* label, const Tensor& t) {
  out << label << ' ' << t.size();
  for (double v : t.data) out << ' ' << v;
  out << '\n';
}

void read_values(std::istream& in, const char* label, Tensor& t) {
  std::string tag;
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != label || count != t.size()) {
    fail(Errc::parse, std::string("checkpoint: expected ") + label + " block of " +
                          std::to_string(t.size()) + " values");
  }
  for (double& v : t.data) {
    if (!(in >> v)) fail(Errc::parse, "checkpoint: truncated values");
  }
}

constexpr const char* kCheckpointMagic = "spacegan-network";
constexpr int kCheckpointVersion = 1;

}  // namespace

void save_checkpoint(std::ostream& out, const Network& net) {
  const auto old_precision = out.precision(17);
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "layers " << net.layers().size() << '\n';
  for (const auto& layer : net.layers()) {
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Dense>) {
            out << "dense " << l.in << ' ' << l.out << '\n';
            write_values(out, "weight", l.weight);
            write_values(out, "bias", l.bias);
          } else if constexpr (std::is_same_v<T, Conv1d>) {
            out << "conv1d " << l.in_channels << ' ' << l.filters << ' ' << l.kernel << ' '
                << l.length << '\n';
            write_values(out, "weight", l.weight);
            write_values(out, "bias", l.bias);
          } else {
            out << "activation " << to_string(l.fn) << ' ' << l.width << '\n';
          }
        },
        layer);
  }
  out.precision(old_precision);
}

Network load_checkpoint(std::istream& in) {
  std::string magic, tag;
  int version = 0;
  std::size_t count = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) {
    fail(Errc::parse, "not a network checkpoint");
  }
  if (version != kCheckpointVersion) fail(Errc::parse, "unsupported checkpoint version");
  if (!(in >> tag >> count) || tag != "layers") fail(Errc::parse, "checkpoint: missing layer count");
  Network net;
  Rng unused(0);
  for (std::size_t l = 0; l < count; ++l) {
    std::string kind;
    if (!(in >> kind)) fail(Errc::parse, "checkpoint: truncated layer list");
    if (kind == "dense") {
      std::size_t i = 0, o = 0;
      if (!(in >> i >> o)) fail(Errc::parse, "checkpoint: bad dense shape");
      auto layer = std::get<Dense>(make_dense(i, o, unused));
      read_values(in, "weight", layer.weight);
      read_values(in, "bias", layer.bias);
      net.add(std::move(layer));
    } else if (kind == "conv1d") {
      std::size_t c = 0, f = 0, k = 0, len = 0;
      if (!(in >> c >> f >> k >> len)) fail(Errc::parse, "checkpoint: bad conv1d shape");
      auto layer = std::get<Conv1d>(make_conv1d(c, f, k, len, unused));
      read_values(in, "weight", layer.weight);
      read_values(in, "bias", layer.bias);
      net.add(std::move(layer));
    } else if (kind == "activation") {
      std::string fn;
      std::size_t width = 0;
      if (!(in >> fn >> width)) fail(Errc::parse, "checkpoint: bad activation");
      net.add(make_activation(activation_from_string(fn), width));
    } else {
      fail(Errc::parse, "checkpoint: unknown layer kind '" + kind + "'");
    }
  }
  return net;
}

GradientCheck check_gradients(const Network& net, const Tensor& input, const Tensor& upstream,
                              double step, double floor) {
  Network work = clone_snapshot(net);
  work.forward(input);
  const Gradients analytic = work.backward(upstream);

  auto loss = [&](const Network& n, const Tensor& x) {
    const Tensor y = n.infer(x);
    double total = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) total += upstream.data[k] * y.data[k];
    return total;
  };
  GradientCheck result;
  auto compare = [&](double a, double numeric) {
    const double denom = std::max({std::abs(a), std::abs(numeric), floor});
    result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
    ++result.checked;
  };

  Network probe = clone_snapshot(net);
  auto params = probe.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t k = 0; k < params[p]->size(); ++k) {
      double& theta = params[p]->data[k];
      const double saved = theta;
      theta = saved + step;
      const double up = loss(probe, input);
      theta = saved - step;
      const double down = loss(probe, input);
      theta = saved;
      compare(analytic.parameters[p].data[k], (up - down) / (2.0 * step));
    }
  }
  Tensor x = input;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x.data[k];
    x.data[k] = saved + step;
    const double up = loss(net, x);
    x.data[k] = saved - step;
    const double down = loss(net, x);
    x.data[k] = saved;
    compare(analytic.input.data[k], (up - down) / (2.0 * step));
  }
  return result;
}

}  // namespace spacegan
