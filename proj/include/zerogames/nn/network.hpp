// Copyright 2026 The Zerogames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "zerogames/nn/layers.hpp"
#include "zerogames/tensor.hpp"

namespace zg::nn {

// Architecture descriptor; fully determines every weight shape.
struct NetworkSpec {
  int input_channels = 3;
  int trunk_channels = 16;
  int residual_blocks = 2;
  int kernel_size = 3;
  int policy_channels = 1;
  int value_pool_channels = 8;
  int value_hidden = 32;

  void validate() const {
    auto positive = [](int v, const char* what) {
      if (v < 1) throw ShapeError(std::string("network spec: ") + what + " must be >= 1");
    };
    positive(input_channels, "input_channels");
    positive(trunk_channels, "trunk_channels");
    positive(residual_blocks, "residual_blocks");
    positive(kernel_size, "kernel_size");
    positive(policy_channels, "policy_channels");
    positive(value_pool_channels, "value_pool_channels");
    positive(value_hidden, "value_hidden");
    if (kernel_size % 2 == 0) throw ShapeError("network spec: kernel_size must be odd");
  }

  std::vector<int> fields() const {
    return {input_channels, trunk_channels, residual_blocks, kernel_size, policy_channels, value_pool_channels, value_hidden};
  }

  // FNV-1a over the fields; identifies compatible sample producers.
  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (int f : fields()) {
      for (int b = 0; b < 4; ++b) {
        h ^= std::uint64_t((std::uint32_t(f) >> (8 * b)) & 0xff);
        h *= 1099511628211ull;
      }
    }
    return h;
  }

  std::string describe() const {
    return "in=" + std::to_string(input_channels) + " C=" + std::to_string(trunk_channels) +
           " B=" + std::to_string(residual_blocks) + " k=" + std::to_string(kernel_size) +
           " P=" + std::to_string(policy_channels) + " V=" + std::to_string(value_pool_channels) +
           " hidden=" + std::to_string(value_hidden);
  }

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

template <typename T>
struct ConvLayer {
  Tensor<T> weight;  // (out, in, k, k)
  Tensor<T> bias;    // (out)
  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

template <typename T>
struct DenseLayer {
  Tensor<T> weight;  // (out, in)
  Tensor<T> bias;    // (out)
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

template <typename T>
struct ResidualBlock {
  ConvLayer<T> first;
  ConvLayer<T> second;
  friend bool operator==(const ResidualBlock&, const ResidualBlock&) = default;
};

template <typename T>
ConvLayer<T> make_conv(int out, int in, int k) {
  return {Tensor<T>({std::size_t(out), std::size_t(in), std::size_t(k), std::size_t(k)}), Tensor<T>({std::size_t(out)})};
}

template <typename T>
DenseLayer<T> make_dense(int out, int in) {
  return {Tensor<T>({std::size_t(out), std::size_t(in)}), Tensor<T>({std::size_t(out)})};
}

// All trainable tensors. Iteration order (for_each) is the canonical order
// used by checkpoints and optimisers.
template <typename T>
struct Weights {
  ConvLayer<T> stem;
  std::vector<ResidualBlock<T>> blocks;
  ConvLayer<T> policy;
  ConvLayer<T> value_conv;
  DenseLayer<T> value_hidden;
  DenseLayer<T> value_out;

  static Weights zeros(const NetworkSpec& s) {
    Weights w;
    const int c = s.trunk_channels, k = s.kernel_size;
    w.stem = make_conv<T>(c, s.input_channels, k);
    for (int b = 0; b < s.residual_blocks; ++b) w.blocks.push_back({make_conv<T>(c, c, k), make_conv<T>(c, c, k)});
    w.policy = make_conv<T>(s.policy_channels, c, 1);
    w.value_conv = make_conv<T>(s.value_pool_channels, c, 1);
    w.value_hidden = make_dense<T>(s.value_hidden, 2 * s.value_pool_channels);
    w.value_out = make_dense<T>(1, s.value_hidden);
    return w;
  }

  template <typename F>
  void for_each(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each(F&& f) const {
    visit(*this, f);
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each([&](const std::string&, const Tensor<T>& t) { n += t.size(); });
    return n;
  }

  template <typename U>
  Weights<U> cast() const {
    Weights<U> out;
    auto conv = [](const ConvLayer<T>& l) { return ConvLayer<U>{l.weight.template cast<U>(), l.bias.template cast<U>()}; };
    auto fc = [](const DenseLayer<T>& l) { return DenseLayer<U>{l.weight.template cast<U>(), l.bias.template cast<U>()}; };
    out.stem = conv(stem);
    for (auto& b : blocks) out.blocks.push_back({conv(b.first), conv(b.second)});
    out.policy = conv(policy);
    out.value_conv = conv(value_conv);
    out.value_hidden = fc(value_hidden);
    out.value_out = fc(value_out);
    return out;
  }

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F& f) {
    f(std::string("stem.weight"), self.stem.weight);
    f(std::string("stem.bias"), self.stem.bias);
    for (std::size_t b = 0; b < self.blocks.size(); ++b) {
      const std::string p = "block" + std::to_string(b);
      f(p + ".first.weight", self.blocks[b].first.weight);
      f(p + ".first.bias", self.blocks[b].first.bias);
      f(p + ".second.weight", self.blocks[b].second.weight);
      f(p + ".second.bias", self.blocks[b].second.bias);
    }
    f(std::string("policy.weight"), self.policy.weight);
    f(std::string("policy.bias"), self.policy.bias);
    f(std::string("value_conv.weight"), self.value_conv.weight);
    f(std::string("value_conv.bias"), self.value_conv.bias);
    f(std::string("value_hidden.weight"), self.value_hidden.weight);
    f(std::string("value_hidden.bias"), self.value_hidden.bias);
    f(std::string("value_out.weight"), self.value_out.weight);
    f(std::string("value_out.bias"), self.value_out.bias);
  }
};

inline constexpr double kHeadInitScale = 0.1;

// He-uniform: U(-b, b) with b = sqrt(6 / fan_in).
template <typename T, typename Rng>
void he_uniform(Tensor<T>& w, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(6.0 / double(fan_in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto& v : w.values()) v = T(u(rng));
}

template <typename T>
std::size_t fan_in(const Tensor<T>& weight) {
  return weight.size() / weight.dim(0);
}

// Fully convolutional policy/value network:
//   trunk  = ReLU(conv_k(x)), then B blocks of ReLU(x + conv_k(ReLU(conv_k(x))))
//   policy = conv_1x1(trunk)                               -> P x H x W logits
//   value  = tanh(fc(ReLU(fc(pool(conv_1x1(trunk))))))     -> scalar
// pool is the per-channel (max, mean), so the value head is board-size free.
template <typename T>
struct Network {
  NetworkSpec spec;
  Weights<T> weights;

  Network() : Network(NetworkSpec{}) {}
  explicit Network(const NetworkSpec& s) : spec(s), weights((s.validate(), Weights<T>::zeros(s))) {}

  template <typename Rng>
  static Network random(const NetworkSpec& s, Rng& rng) {
    Network n(s);
    // Head outputs start small: He scaling there saturates tanh (the trunk
    // output is all non-negative), which stalls value learning.
    n.weights.for_each([&](const std::string& name, Tensor<T>& t) {
      if (t.rank() < 2) return;
      he_uniform(t, fan_in(t), rng);
      if (name == "value_out.weight" || name == "policy.weight") {
        for (auto& v : t.values()) v *= T(kHeadInitScale);
      }
    });
    return n;
  }

  static Network random(const NetworkSpec& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random(s, rng);
  }

  template <typename U>
  Network<U> cast() const {
    Network<U> out(spec);
    out.weights = weights.template cast<U>();
    return out;
  }

  // Verifies every tensor against the spec.
  void validate() const {
    spec.validate();
    const auto expected = Weights<T>::zeros(spec);
    std::vector<std::vector<std::size_t>> shapes;
    expected.for_each([&](const std::string&, const Tensor<T>& t) { shapes.push_back(t.shape()); });
    std::size_t i = 0;
    weights.for_each([&](const std::string& name, const Tensor<T>& t) {
      if (i >= shapes.size() || t.shape() != shapes[i]) throw ShapeError("weight " + name + " has shape " + t.shape_string());
      ++i;
    });
    if (i != shapes.size()) throw ShapeError("weight count does not match spec");
  }

  friend bool operator==(const Network&, const Network&) = default;
};

template <typename T>
struct Output {
  Tensor<T> policy;  // policy_channels x H x W logits
  T value = 0;       // in (-1, 1)
};

// Intermediate values kept for backpropagation.
template <typename T>
struct Activations {
  Tensor<T> input;
  Tensor<T> stem;  // post-ReLU
  struct Block {
    Tensor<T> hidden;  // post-ReLU
    Tensor<T> out;     // post-ReLU
  };
  std::vector<Block> blocks;
  std::vector<std::size_t> value_features_shape;
  Tensor<T> pooled;
  std::vector<std::size_t> pool_argmax;
  Tensor<T> hidden;  // post-ReLU
  T value = 0;
};

template <typename T>
Output<T> forward(const Network<T>& net, const Tensor<T>& input, Activations<T>* cache = nullptr) {
  if (input.rank() != 3 || int(input.dim(0)) != net.spec.input_channels) {
    throw ShapeError("network expects " + std::to_string(net.spec.input_channels) + " input planes, got " +
                     input.shape_string());
  }
  const auto& w = net.weights;
  Tensor<T> x = conv2d(input, w.stem.weight, w.stem.bias);
  relu_inplace(x);
  if (cache) {
    cache->input = input;
    cache->stem = x;
    cache->blocks.clear();
  }
  for (const auto& b : w.blocks) {
    Tensor<T> h = conv2d(x, b.first.weight, b.first.bias);
    relu_inplace(h);
    Tensor<T> y = conv2d(h, b.second.weight, b.second.bias);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + y[i];
    relu_inplace(y);
    if (cache) cache->blocks.push_back({std::move(h), y});
    x = std::move(y);
  }
  Output<T> out;
  out.policy = conv2d(x, w.policy.weight, w.policy.bias);
  Tensor<T> vf = conv2d(x, w.value_conv.weight, w.value_conv.bias);
  auto pooled = global_pool(vf);
  Tensor<T> hidden = dense(pooled.features, w.value_hidden.weight, w.value_hidden.bias);
  relu_inplace(hidden);
  const Tensor<T> pre = dense(hidden, w.value_out.weight, w.value_out.bias);
  out.value = std::tanh(pre[0]);
  if (cache) {
    cache->value_features_shape = vf.shape();
    cache->pooled = std::move(pooled.features);
    cache->pool_argmax = std::move(pooled.argmax);
    cache->hidden = std::move(hidden);
    cache->value = out.value;
  }
  return out;
}

template <typename T>
void add_into(Tensor<T>& dst, const Tensor<T>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

// Accumulates d(loss)/d(weights) into `grads` given the loss gradients with
// respect to the policy logits and the value output. Returns d(loss)/d(input).
template <typename T>
Tensor<T> backward(const Network<T>& net, const Activations<T>& act, const Tensor<T>& grad_policy, T grad_value,
                   Weights<T>& grads) {
  const auto& w = net.weights;
  const Tensor<T>& trunk = act.blocks.empty() ? act.stem : act.blocks.back().out;

  // Value head.
  Tensor<T> gpre({1}, grad_value * (T(1) - act.value * act.value));
  auto g_out = dense_backward(act.hidden, w.value_out.weight, gpre);
  add_into(grads.value_out.weight, g_out.weight);
  add_into(grads.value_out.bias, g_out.bias);
  relu_backward_inplace(act.hidden, g_out.input);
  auto g_hidden = dense_backward(act.pooled, w.value_hidden.weight, g_out.input);
  add_into(grads.value_hidden.weight, g_hidden.weight);
  add_into(grads.value_hidden.bias, g_hidden.bias);
  Tensor<T> g_vf = global_pool_backward(act.value_features_shape, act.pool_argmax, g_hidden.input);
  auto g_vconv = conv2d_backward(trunk, w.value_conv.weight, g_vf);
  add_into(grads.value_conv.weight, g_vconv.weight);
  add_into(grads.value_conv.bias, g_vconv.bias);

  // Policy head.
  auto g_pconv = conv2d_backward(trunk, w.policy.weight, grad_policy);
  add_into(grads.policy.weight, g_pconv.weight);
  add_into(grads.policy.bias, g_pconv.bias);

  Tensor<T> g = std::move(g_vconv.input);
  add_into(g, g_pconv.input);

  for (std::size_t bi = w.blocks.size(); bi-- > 0;) {
    const auto& blk = w.blocks[bi];
    const auto& a = act.blocks[bi];
    const Tensor<T>& in = bi == 0 ? act.stem : act.blocks[bi - 1].out;
    relu_backward_inplace(a.out, g);
    auto g2 = conv2d_backward(a.hidden, blk.second.weight, g);
    add_into(grads.blocks[bi].second.weight, g2.weight);
    add_into(grads.blocks[bi].second.bias, g2.bias);
    relu_backward_inplace(a.hidden, g2.input);
    auto g1 = conv2d_backward(in, blk.first.weight, g2.input);
    add_into(grads.blocks[bi].first.weight, g1.weight);
    add_into(grads.blocks[bi].first.bias, g1.bias);
    add_into(g, g1.input);
  }

  relu_backward_inplace(act.stem, g);
  auto gs = conv2d_backward(act.input, w.stem.weight, g);
  add_into(grads.stem.weight, gs.weight);
  add_into(grads.stem.bias, gs.bias);
  return std::move(gs.input);
}

}  // namespace zg::nn
