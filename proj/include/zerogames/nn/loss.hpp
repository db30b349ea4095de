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
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "zerogames/nn/network.hpp"
#include "zerogames/nn/softmax.hpp"

namespace zg::nn {

class TargetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LossTerms {
  double policy = 0;  // cross-entropy against the visit distribution
  double value = 0;   // squared error against the final reward
  double decay = 0;   // lambda * sum of squared weights
  double total() const { return policy + value + decay; }
};

// Cross-entropy of the masked softmax against `target` plus (value-reward)^2.
// When the gradient outputs are given they receive d/dlogits and d/dvalue.
template <typename T>
LossTerms head_loss(const Tensor<T>& logits, std::span<const int> legal, std::span<const T> target, T value, T reward,
                    Tensor<T>* grad_logits = nullptr, T* grad_value = nullptr) {
  if (target.size() != logits.size()) throw TargetError("policy target length does not match the logits");
  double mass = 0;
  for (T v : target) {
    if (v < T(0)) throw TargetError("policy target has a negative entry");
    mass += double(v);
  }
  if (std::abs(mass - 1.0) > 1e-6) throw TargetError("policy target sums to " + std::to_string(mass) + ", expected 1");
  const auto probs = masked_softmax(logits.values(), legal, 1.0);
  LossTerms out;
  for (int a : legal) {
    if (target[a] > T(0)) out.policy -= double(target[a]) * std::log(double(probs[a]));
  }
  const double diff = double(value) - double(reward);
  out.value = diff * diff;
  if (grad_logits) {
    *grad_logits = Tensor<T>(logits.shape());
    for (int a : legal) (*grad_logits)[a] = probs[a] - target[a];
  }
  if (grad_value) *grad_value = T(2 * diff);
  return out;
}

// lambda * sum(theta^2); adds 2 * lambda * theta to `grads` when given.
template <typename T>
double weight_decay(const Weights<T>& w, double lambda, Weights<T>* grads = nullptr) {
  double sum = 0;
  w.for_each([&](const std::string&, const Tensor<T>& t) {
    for (T v : t.values()) sum += double(v) * double(v);
  });
  if (grads && lambda != 0) {
    std::vector<const Tensor<T>*> src;
    w.for_each([&](const std::string&, const Tensor<T>& t) { src.push_back(&t); });
    std::size_t i = 0;
    grads->for_each([&](const std::string&, Tensor<T>& g) {
      const Tensor<T>& t = *src[i++];
      for (std::size_t j = 0; j < g.size(); ++j) g[j] += T(2 * lambda) * t[j];
    });
  }
  return lambda * sum;
}

// Anything carrying an encoded state, a policy target in action-space layout,
// the legal action indices and the final reward.
template <typename E>
concept TrainingExample = requires(const E& e) {
  { e.state.values() };
  { e.policy.values() };
  { e.legal.size() } -> std::convertible_to<std::size_t>;
  { e.reward } -> std::convertible_to<double>;
};

template <typename T, typename Src>
Tensor<T> as(const Tensor<Src>& t) {
  if constexpr (std::is_same_v<T, Src>) {
    return t;
  } else {
    return t.template cast<T>();
  }
}

// Mean head loss over the batch plus weight decay. Gradients of the same
// quantity are accumulated into `grads` (which must be zero-initialised by the
// caller when a fresh gradient is wanted).
template <typename T, TrainingExample E>
LossTerms batch_loss(const Network<T>& net, std::span<const E> batch, double lambda, Weights<T>* grads = nullptr) {
  LossTerms total;
  if (batch.empty()) throw TargetError("empty batch");
  const T scale = T(1) / T(batch.size());
  for (const E& ex : batch) {
    const Tensor<T> input = as<T>(ex.state);
    const Tensor<T> target = as<T>(ex.policy);
    Activations<T> act;
    auto out = forward(net, input, grads ? &act : nullptr);
    const std::vector<int> legal(ex.legal.begin(), ex.legal.end());
    Tensor<T> gl;
    T gv = 0;
    auto terms = head_loss<T>(out.policy, legal, target.values(), out.value, T(ex.reward), grads ? &gl : nullptr,
                              grads ? &gv : nullptr);
    total.policy += terms.policy / double(batch.size());
    total.value += terms.value / double(batch.size());
    if (grads) {
      for (auto& v : gl.values()) v *= scale;
      backward(net, act, gl, gv * scale, *grads);
    }
  }
  total.decay = weight_decay(net.weights, lambda, grads);
  return total;
}

}  // namespace zg::nn
