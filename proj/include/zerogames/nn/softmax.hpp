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
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace zg::nn {

// p_a proportional to exp(temperature * logit_a) over the legal indices, zero
// elsewhere. The maximum is subtracted before exponentiation.
template <typename T>
std::vector<T> masked_softmax(std::span<const T> logits, std::span<const int> legal, double temperature = 1.0) {
  if (legal.empty()) throw std::invalid_argument("masked_softmax: no legal action");
  if (!(temperature > 0.0)) throw std::invalid_argument("masked_softmax: temperature must be positive");
  std::vector<T> p(logits.size(), T(0));
  double top = -std::numeric_limits<double>::infinity();
  for (int a : legal) top = std::max(top, temperature * double(logits[a]));
  double sum = 0;
  for (int a : legal) {
    const double e = std::exp(temperature * double(logits[a]) - top);
    p[a] = T(e);
    sum += e;
  }
  for (int a : legal) p[a] = T(double(p[a]) / sum);
  return p;
}

template <typename T>
std::vector<T> masked_softmax(const std::vector<T>& logits, const std::vector<int>& legal, double temperature = 1.0) {
  return masked_softmax(std::span<const T>(logits), std::span<const int>(legal), temperature);
}

// Mask form: `mask[a]` true for legal actions.
template <typename T>
std::vector<T> masked_softmax(std::span<const T> logits, const std::vector<bool>& mask, double temperature = 1.0) {
  std::vector<int> legal;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a]) legal.push_back(int(a));
  }
  return masked_softmax(logits, std::span<const int>(legal), temperature);
}

}  // namespace zg::nn
