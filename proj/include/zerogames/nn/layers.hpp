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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "zerogames/tensor.hpp"

namespace zg::nn {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> weight;
  Tensor<T> bias;
};

namespace detail {

inline void check_conv(const std::vector<std::size_t>& in, const std::vector<std::size_t>& w,
                       const std::vector<std::size_t>& b) {
  if (in.size() != 3 || w.size() != 4 || b.size() != 1) throw ShapeError("conv2d expects CxHxW input, OxIxKxK kernel, O bias");
  if (w[1] != in[0]) {
    throw ShapeError("conv2d kernel reads " + std::to_string(w[1]) + " channels, input has " + std::to_string(in[0]));
  }
  if (w[2] != w[3] || w[2] % 2 == 0) throw ShapeError("conv2d kernel must be square with odd size");
  if (b[0] != w[0]) throw ShapeError("conv2d bias length does not match output channels");
}

}  // namespace detail

// Cross-correlation with zero "same" padding. Each output cell accumulates
// bias first, then taps in (in_channel, ky, kx) order; growth operations rely
// on that order to keep outputs bit-identical.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias) {
  detail::check_conv(input.shape(), weight.shape(), bias.shape());
  const int cin = int(input.dim(0)), h = int(input.dim(1)), w = int(input.dim(2));
  const int cout = int(weight.dim(0)), k = int(weight.dim(2)), pad = k / 2;
  Tensor<T> out({std::size_t(cout), std::size_t(h), std::size_t(w)});
  const std::size_t plane = std::size_t(h) * w;
  for (int co = 0; co < cout; ++co) {
    T* o = out.data() + co * plane;
    std::fill(o, o + plane, bias[co]);
    for (int ci = 0; ci < cin; ++ci) {
      const T* in = input.data() + ci * plane;
      const T* kw = weight.data() + (std::size_t(co) * cin + ci) * k * k;
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - pad;
        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
        for (int kx = 0; kx < k; ++kx) {
          const int dx = kx - pad;
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          const T wv = kw[ky * k + kx];
          for (int y = y0; y < y1; ++y) {
            T* orow = o + y * w;
            const T* irow = in + (y + dy) * w;
            for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x + dx];
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& grad_out) {
  const int cin = int(input.dim(0)), h = int(input.dim(1)), w = int(input.dim(2));
  const int cout = int(weight.dim(0)), k = int(weight.dim(2)), pad = k / 2;
  if (grad_out.shape() != std::vector<std::size_t>{std::size_t(cout), std::size_t(h), std::size_t(w)}) {
    throw ShapeError("conv2d_backward: gradient shape " + grad_out.shape_string() + " does not match output");
  }
  ConvGrads<T> g{Tensor<T>(input.shape()), Tensor<T>(weight.shape()), Tensor<T>({std::size_t(cout)})};
  const std::size_t plane = std::size_t(h) * w;
  for (int co = 0; co < cout; ++co) {
    const T* go = grad_out.data() + co * plane;
    T bsum = 0;
    for (std::size_t i = 0; i < plane; ++i) bsum += go[i];
    g.bias[co] = bsum;
    for (int ci = 0; ci < cin; ++ci) {
      const T* in = input.data() + ci * plane;
      T* gi = g.input.data() + ci * plane;
      const T* kw = weight.data() + (std::size_t(co) * cin + ci) * k * k;
      T* gw = g.weight.data() + (std::size_t(co) * cin + ci) * k * k;
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - pad;
        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
        for (int kx = 0; kx < k; ++kx) {
          const int dx = kx - pad;
          const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
          const T wv = kw[ky * k + kx];
          T acc = 0;
          for (int y = y0; y < y1; ++y) {
            const T* grow = go + y * w;
            const T* irow = in + (y + dy) * w;
            T* girow = gi + (y + dy) * w;
            for (int x = x0; x < x1; ++x) {
              acc += grow[x] * irow[x + dx];
              girow[x + dx] += wv * grow[x];
            }
          }
          gw[ky * k + kx] = acc;
        }
      }
    }
  }
  return g;
}

template <typename T>
void relu_inplace(Tensor<T>& t) {
  for (auto& v : t.values()) v = v > T(0) ? v : T(0);
}

// Masks `grad` by the post-activation output of a ReLU.
template <typename T>
void relu_backward_inplace(const Tensor<T>& activated, Tensor<T>& grad) {
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!(activated[i] > T(0))) grad[i] = T(0);
  }
}

template <typename T>
struct PoolResult {
  Tensor<T> features;               // length 2C: (max_c, mean_c) interleaved
  std::vector<std::size_t> argmax;  // first maximising cell per channel
};

// Per-channel (max, mean) over the spatial extent; output length depends only
// on the channel count.
template <typename T>
PoolResult<T> global_pool(const Tensor<T>& x) {
  if (x.rank() != 3 || x.dim(1) * x.dim(2) == 0) throw ShapeError("global_pool expects a non-empty CxHxW tensor");
  const std::size_t c = x.dim(0), plane = x.dim(1) * x.dim(2);
  PoolResult<T> r{Tensor<T>({2 * c}), std::vector<std::size_t>(c)};
  for (std::size_t ch = 0; ch < c; ++ch) {
    const T* p = x.data() + ch * plane;
    std::size_t best = 0;
    T sum = 0;
    for (std::size_t i = 0; i < plane; ++i) {
      if (p[i] > p[best]) best = i;
      sum += p[i];
    }
    r.features[2 * ch] = p[best];
    r.features[2 * ch + 1] = sum / T(plane);
    r.argmax[ch] = best;
  }
  return r;
}

template <typename T>
Tensor<T> global_pool_backward(const std::vector<std::size_t>& input_shape, const std::vector<std::size_t>& argmax,
                               const Tensor<T>& grad) {
  Tensor<T> g(input_shape);
  const std::size_t c = input_shape[0], plane = input_shape[1] * input_shape[2];
  for (std::size_t ch = 0; ch < c; ++ch) {
    T* p = g.data() + ch * plane;
    const T share = grad[2 * ch + 1] / T(plane);
    for (std::size_t i = 0; i < plane; ++i) p[i] = share;
    p[argmax[ch]] += grad[2 * ch];
  }
  return g;
}

// y = W x + b with W of shape (out, in).
template <typename T>
Tensor<T> dense(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  if (weight.rank() != 2 || weight.dim(1) != x.size() || bias.size() != weight.dim(0)) {
    throw ShapeError("dense: weight " + weight.shape_string() + " incompatible with input of length " +
                     std::to_string(x.size()));
  }
  const std::size_t out = weight.dim(0), in = weight.dim(1);
  Tensor<T> y({out});
  for (std::size_t o = 0; o < out; ++o) {
    T acc = bias[o];
    const T* row = weight.data() + o * in;
    for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
  return y;
}

template <typename T>
struct DenseGrads {
  Tensor<T> input;
  Tensor<T> weight;
  Tensor<T> bias;
};

template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& grad_out) {
  const std::size_t out = weight.dim(0), in = weight.dim(1);
  DenseGrads<T> g{Tensor<T>({in}), Tensor<T>(weight.shape()), grad_out};
  for (std::size_t o = 0; o < out; ++o) {
    const T go = grad_out[o];
    const T* row = weight.data() + o * in;
    T* grow = g.weight.data() + o * in;
    for (std::size_t i = 0; i < in; ++i) {
      grow[i] = go * x[i];
      g.input[i] += row[i] * go;
    }
  }
  return g;
}

}  // namespace zg::nn
