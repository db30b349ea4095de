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
#include <stdexcept>
#include <string>

#include "zerogames/nn/network.hpp"

namespace zg::nn {

// Function-preserving growth. Every added path is initialised so that its
// contribution to existing outputs is an exact zero; layers that feed *new*
// units get He-random weights so the added capacity still receives gradient.

enum class LayerGroup { Trunk, ValuePool, ValueHidden };

inline LayerGroup parse_layer_group(const std::string& s) {
  if (s == "trunk") return LayerGroup::Trunk;
  if (s == "value_pool") return LayerGroup::ValuePool;
  if (s == "value_hidden") return LayerGroup::ValueHidden;
  throw std::invalid_argument("unknown layer group '" + s + "' (trunk, value_pool, value_hidden)");
}

namespace detail {

// Copies `l` into a larger (out, in) layer. New output rows are He-random when
// `random_rows`, zero otherwise; new input columns of old rows are zero.
template <typename T, typename Rng>
ConvLayer<T> widen_conv(const ConvLayer<T>& l, int out, int in, bool random_rows, Rng& rng) {
  const int old_out = int(l.weight.dim(0)), old_in = int(l.weight.dim(1)), k = int(l.weight.dim(2));
  auto g = make_conv<T>(out, in, k);
  const std::size_t kk = std::size_t(k) * k;
  for (int o = 0; o < old_out; ++o) {
    for (int i = 0; i < old_in; ++i) {
      for (std::size_t t = 0; t < kk; ++t) g.weight[(std::size_t(o) * in + i) * kk + t] = l.weight[(std::size_t(o) * old_in + i) * kk + t];
    }
    g.bias[o] = l.bias[o];
  }
  if (random_rows && out > old_out) {
    const double bound = std::sqrt(6.0 / double(std::size_t(in) * kk));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t j = std::size_t(old_out) * in * kk; j < g.weight.size(); ++j) g.weight[j] = T(u(rng));
  }
  return g;
}

template <typename T, typename Rng>
DenseLayer<T> widen_dense(const DenseLayer<T>& l, int out, int in, bool random_rows, Rng& rng) {
  const int old_out = int(l.weight.dim(0)), old_in = int(l.weight.dim(1));
  auto g = make_dense<T>(out, in);
  for (int o = 0; o < old_out; ++o) {
    for (int i = 0; i < old_in; ++i) g.weight[std::size_t(o) * in + i] = l.weight[std::size_t(o) * old_in + i];
    g.bias[o] = l.bias[o];
  }
  if (random_rows && out > old_out) {
    const double bound = std::sqrt(6.0 / double(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t j = std::size_t(old_out) * in; j < g.weight.size(); ++j) g.weight[j] = T(u(rng));
  }
  return g;
}

}  // namespace detail

// Appends a residual block whose second convolution is exactly zero, so the
// block reduces to ReLU(x) = x on the (non-negative) trunk.
template <typename T, typename Rng>
Network<T> grow_add_block(const Network<T>& net, Rng& rng) {
  Network<T> out = net;
  const int c = net.spec.trunk_channels, k = net.spec.kernel_size;
  ResidualBlock<T> b{make_conv<T>(c, c, k), make_conv<T>(c, c, k)};
  he_uniform(b.first.weight, fan_in(b.first.weight), rng);
  out.weights.blocks.push_back(std::move(b));
  out.spec.residual_blocks += 1;
  return out;
}

template <typename T, typename Rng>
Network<T> grow_add_channels(const Network<T>& net, LayerGroup group, int extra, Rng& rng) {
  if (extra < 1) throw std::invalid_argument("grow_add_channels: extra must be >= 1");
  Network<T> out = net;
  auto& w = out.weights;
  auto& s = out.spec;
  switch (group) {
    case LayerGroup::Trunk: {
      const int c = s.trunk_channels + extra;
      w.stem = detail::widen_conv(w.stem, c, s.input_channels, true, rng);
      for (auto& b : w.blocks) {
        b.first = detail::widen_conv(b.first, c, c, true, rng);
        b.second = detail::widen_conv(b.second, c, c, true, rng);
      }
      w.policy = detail::widen_conv(w.policy, s.policy_channels, c, false, rng);
      w.value_conv = detail::widen_conv(w.value_conv, s.value_pool_channels, c, false, rng);
      s.trunk_channels = c;
      break;
    }
    case LayerGroup::ValuePool: {
      const int v = s.value_pool_channels + extra;
      w.value_conv = detail::widen_conv(w.value_conv, v, s.trunk_channels, true, rng);
      // Pool features are (max, mean) per channel, so new ones come last.
      w.value_hidden = detail::widen_dense(w.value_hidden, s.value_hidden, 2 * v, false, rng);
      s.value_pool_channels = v;
      break;
    }
    case LayerGroup::ValueHidden: {
      const int h = s.value_hidden + extra;
      w.value_hidden = detail::widen_dense(w.value_hidden, h, 2 * s.value_pool_channels, true, rng);
      w.value_out = detail::widen_dense(w.value_out, 1, h, false, rng);
      s.value_hidden = h;
      break;
    }
  }
  return out;
}

// Embeds every k x k trunk kernel at the centre of a new_k x new_k kernel with
// a zero border. With same-padding the outputs are unchanged.
template <typename T>
Network<T> grow_kernel(const Network<T>& net, int new_k) {
  const int k = net.spec.kernel_size;
  if (new_k % 2 == 0 || new_k <= k) {
    throw std::invalid_argument("grow_kernel: new kernel size " + std::to_string(new_k) + " must be odd and larger than " +
                                std::to_string(k));
  }
  const int off = (new_k - k) / 2;
  auto embed = [&](const ConvLayer<T>& l) {
    const int o = int(l.weight.dim(0)), i = int(l.weight.dim(1));
    auto g = make_conv<T>(o, i, new_k);
    g.bias = l.bias;
    for (int a = 0; a < o; ++a) {
      for (int b = 0; b < i; ++b) {
        for (int y = 0; y < k; ++y) {
          for (int x = 0; x < k; ++x) {
            g.weight[((std::size_t(a) * i + b) * new_k + y + off) * new_k + x + off] =
                l.weight[((std::size_t(a) * i + b) * k + y) * k + x];
          }
        }
      }
    }
    return g;
  };
  Network<T> out = net;
  out.weights.stem = embed(net.weights.stem);
  for (auto& b : out.weights.blocks) {
    b.first = embed(b.first);
    b.second = embed(b.second);
  }
  out.spec.kernel_size = new_k;
  return out;
}

}  // namespace zg::nn
