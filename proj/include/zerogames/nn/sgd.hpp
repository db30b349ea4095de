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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zerogames/nn/network.hpp"

namespace zg::nn {

class NonFiniteGradientError : public std::runtime_error {
 public:
  explicit NonFiniteGradientError(std::string layer)
      : std::runtime_error("non-finite gradient in " + layer), layer_(std::move(layer)) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};

// theta <- theta - lr * g. Every gradient is checked before any weight moves.
template <typename T>
void sgd_step(Weights<T>& weights, const Weights<T>& grads, double lr) {
  std::vector<const Tensor<T>*> g;
  grads.for_each([&](const std::string& name, const Tensor<T>& t) {
    for (T v : t.values()) {
      if (!std::isfinite(v)) throw NonFiniteGradientError(name);
    }
    g.push_back(&t);
  });
  std::size_t i = 0;
  weights.for_each([&](const std::string& name, Tensor<T>& w) {
    const Tensor<T>& gt = *g.at(i++);
    if (gt.shape() != w.shape()) throw ShapeError("gradient shape mismatch for " + name);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= T(lr) * gt[j];
  });
}

// Rescales `grads` so their global L2 norm is at most `max_norm` and returns
// the norm before clipping. Non-positive `max_norm` leaves them untouched.
template <typename T>
double clip_grad_norm(Weights<T>& grads, double max_norm) {
  double sq = 0;
  grads.for_each([&](const std::string&, const Tensor<T>& t) {
    for (T v : t.values()) sq += double(v) * double(v);
  });
  const double norm = std::sqrt(sq);
  if (max_norm > 0 && norm > max_norm) {
    const T f = T(max_norm / norm);
    grads.for_each([&](const std::string&, Tensor<T>& t) {
      for (auto& v : t.values()) v *= f;
    });
  }
  return norm;
}

}  // namespace zg::nn
