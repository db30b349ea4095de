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
#include <optional>
#include <random>
#include <string>

#include "zerogames/games/registry.hpp"
#include "zerogames/mcts/search.hpp"
#include "zerogames/nn/checkpoint.hpp"

namespace zg::play {

using mcts::Rng;

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // Action index for a decision state.
  virtual int choose(const StatePtr& state, Rng& rng) = 0;
};

class RandomAgent final : public Agent {
 public:
  std::string name() const override { return "random"; }
  int choose(const StatePtr& state, Rng& rng) override {
    auto legal = state->legal_actions();
    return legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
  }
};

// Plays the most visited move of a search. PUCT with a network, or plain UCT
// with random rollouts when constructed without one. Never adds root noise.
class EngineAgent final : public Agent {
 public:
  EngineAgent(std::shared_ptr<const nn::Network<float>> net, mcts::SearchConfig config, std::string label = "engine")
      : config_(config), label_(std::move(label)) {
    config_.root_noise = false;
    if (net) {
      evaluator_ = std::make_unique<mcts::NetworkEvaluator>(std::move(net));
      config_.mode = mcts::Mode::PUCT;
    } else {
      config_.mode = mcts::Mode::UCT;
    }
    config_.validate();
  }

  static EngineAgent from_checkpoint(const nn::Checkpoint& ck, int simulations) {
    mcts::SearchConfig c;
    c.simulations = simulations;
    return EngineAgent(std::make_shared<const nn::Network<float>>(ck.network), c, ck.game_id + "@" + std::to_string(ck.step));
  }

  std::string name() const override { return label_; }

  int choose(const StatePtr& state, Rng& rng) override {
    auto c = config_;
    c.seed = rng();
    last_ = mcts::run_search(state, c, evaluator_.get());
    return last_->action;
  }

  const std::optional<mcts::SearchResult>& last_search() const { return last_; }
  const mcts::SearchConfig& config() const { return config_; }

 private:
  mcts::SearchConfig config_;
  std::unique_ptr<mcts::NetworkEvaluator> evaluator_;
  std::string label_;
  std::optional<mcts::SearchResult> last_;
};

// Samples a chance outcome with its probability.
inline const ChanceOutcome& roll(const std::vector<ChanceOutcome>& outcomes, Rng& rng) {
  std::vector<double> w;
  for (const auto& o : outcomes) w.push_back(o.probability);
  return outcomes[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)];
}

}  // namespace zg::play
