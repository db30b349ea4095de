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

#include <memory>
#include <vector>

#include "zerogames/game.hpp"
#include "zerogames/nn/network.hpp"

namespace zg::mcts {

// Leaf evaluation for PUCT. `value` is from the perspective of the player to
// move in the evaluated state; `logits` follow the action-space layout.
struct Evaluation {
  std::vector<float> logits;
  float value = 0.0f;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Evaluation evaluate(const GameState& state) = 0;
};

// Flat logits and a neutral value. Handy for tests and as a "step zero" net.
class UniformEvaluator final : public Evaluator {
 public:
  Evaluation evaluate(const GameState& state) override {
    return {std::vector<float>(state.action_space().total(), 0.0f), 0.0f};
  }
};

class NetworkEvaluator final : public Evaluator {
 public:
  explicit NetworkEvaluator(std::shared_ptr<const nn::Network<float>> net) : net_(std::move(net)) {}

  Evaluation evaluate(const GameState& state) override {
    auto out = nn::forward(*net_, state.encode());
    if (int(out.policy.size()) != state.action_space().total()) {
      throw nn::ShapeError("policy head has " + out.policy.shape_string() + " outputs but " + state.game_id() +
                           " needs " + std::to_string(state.action_space().channels) + " channels");
    }
    if (!state.transposed_view()) return {std::move(out.policy.raw()), out.value};
    std::vector<float> logits(out.policy.size());
    for (std::size_t a = 0; a < logits.size(); ++a) logits[a] = out.policy[state.view_index(int(a))];
    return {std::move(logits), out.value};
  }

  const nn::Network<float>& network() const { return *net_; }

 private:
  std::shared_ptr<const nn::Network<float>> net_;
};

}  // namespace zg::mcts
