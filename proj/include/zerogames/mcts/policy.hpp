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
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "zerogames/nn/softmax.hpp"

namespace zg::mcts {

using Rng = std::mt19937_64;
using nn::masked_softmax;

inline double uct_score(double avg_reward, int child_sims, int parent_sims, double k) {
  if (child_sims == 0) return std::numeric_limits<double>::infinity();
  if (k == 0.0) return avg_reward;
  return avg_reward + k * std::sqrt(std::log(double(parent_sims)) / child_sims);
}

// The log is dropped and an unvisited child counts as avg 0 with 1 + n in the
// denominator.
inline double puct_score(double avg_reward, double prior, int child_sims, int parent_sims) {
  return avg_reward + prior * std::sqrt(double(parent_sims)) / (1.0 + child_sims);
}

// Mixes (1 - epsilon) * prior with epsilon * Dir(alpha) over the legal indices.
// Illegal entries are left untouched (they should be zero).
inline void add_dirichlet_noise(std::span<double> priors, std::span<const int> legal, double alpha, double epsilon,
                                Rng& rng) {
  if (legal.empty() || epsilon == 0.0) return;
  if (!(alpha > 0.0)) throw std::invalid_argument("dirichlet alpha must be positive");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> noise(legal.size());
  double sum = 0;
  for (auto& n : noise) sum += (n = gamma(rng));
  if (!(sum > 0.0)) {
    // Every draw underflowed; fall back to the symmetric mean.
    std::fill(noise.begin(), noise.end(), 1.0);
    sum = double(noise.size());
  }
  for (std::size_t i = 0; i < legal.size(); ++i) {
    double& p = priors[legal[i]];
    p = (1.0 - epsilon) * p + epsilon * noise[i] / sum;
  }
}

inline std::vector<double> add_dirichlet_noise(std::vector<double> priors, const std::vector<int>& legal,
                                               double alpha, double epsilon, Rng& rng) {
  add_dirichlet_noise(std::span<double>(priors), std::span<const int>(legal), alpha, epsilon, rng);
  return priors;
}

}  // namespace zg::mcts
