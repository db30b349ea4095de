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
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zerogames/game.hpp"
#include "zerogames/mcts/evaluator.hpp"
#include "zerogames/mcts/policy.hpp"

namespace zg::mcts {

enum class Mode { UCT, PUCT };

struct SearchConfig {
  Mode mode = Mode::PUCT;
  int simulations = 64;  // M
  double k = 1.0;
  double temperature = 1.0;
  double dirichlet_alpha = 0.3;
  double dirichlet_epsilon = 0.25;
  bool root_noise = false;  // self-play only
  std::uint64_t seed = 0;

  void validate() const {
    if (simulations < 1) throw std::invalid_argument("search needs at least one simulation");
    if (!(k >= 0.0)) throw std::invalid_argument("exploration constant must be non-negative");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (!(dirichlet_epsilon >= 0.0 && dirichlet_epsilon <= 1.0)) {
      throw std::invalid_argument("dirichlet epsilon must lie in [0, 1]");
    }
  }
};

// Decision nodes are counted once when they are first evaluated and once per
// simulation passing through them, so num_sims = 1 + sum over children.
// Chance nodes are never evaluated: num_sims = sum over children.
struct SearchNode {
  StatePtr state;  // set when the node is first reached
  int move = -1;   // action index, or the outcome value under a chance node
  double prior = 0.0;  // network prior, or outcome probability under a chance node
  int num_sims = 0;
  double total_reward = 0.0;  // from the viewpoint of the player to move at the parent
  bool expanded = false;
  std::vector<SearchNode> children;

  double avg_reward() const { return num_sims > 0 ? total_reward / num_sims : 0.0; }
  bool is_chance() const { return state && state->is_chance(); }

  const SearchNode* child(int m) const {
    for (const auto& c : children) {
      if (c.move == m) return &c;
    }
    return nullptr;
  }
};

struct SearchResult {
  std::vector<int> visits;            // indexed by action
  std::vector<double> distribution;   // visits / M, zero on illegal actions
  int action = -1;                    // most visited, lowest index on ties
  double value = 0.0;                 // root mover's average over all simulations
};

// Plays uniformly random moves (and samples chance outcomes) to the end.
// Returns the result for Player::First.
inline int rollout(StatePtr state, Rng& rng) {
  while (!state->terminal()) {
    if (state->is_chance()) {
      auto outcomes = state->chance_outcomes();
      std::vector<double> w;
      for (const auto& o : outcomes) w.push_back(o.probability);
      state = outcomes[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)].successor;
      continue;
    }
    auto legal = state->legal_actions();
    state = state->apply(legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)]);
  }
  return outcome(*state, Player::First);
}

inline void expand_chance(SearchNode& node) {
  if (!node.is_chance()) throw GameError("chance step on a decision node");
  if (node.expanded) return;
  for (auto& o : node.state->chance_outcomes()) {
    SearchNode c;
    c.state = o.successor;
    c.move = o.value;
    c.prior = o.probability;
    node.children.push_back(std::move(c));
  }
  node.expanded = true;
}

// Samples an outcome child of a chance node with its probability.
inline SearchNode& chance_step(SearchNode& node, Rng& rng) {
  expand_chance(node);
  std::vector<double> w;
  for (const auto& c : node.children) w.push_back(c.prior);
  return node.children[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)];
}

class Search {
 public:
  Search(StatePtr root, SearchConfig config, Evaluator* evaluator = nullptr)
      : config_(config), evaluator_(evaluator), rng_(config.seed) {
    config_.validate();
    if (!root) throw std::invalid_argument("search needs a root state");
    if (root->terminal()) throw GameError("search started from a terminal state");
    if (root->is_chance()) throw GameError("search started from a chance node; sample the outcome first");
    if (config_.mode == Mode::PUCT && evaluator_ == nullptr) {
      throw std::invalid_argument("PUCT search needs an evaluator");
    }
    root_.state = std::move(root);
    // The root's own evaluation is not one of the M simulations.
    expand(root_, true);
    root_.num_sims = 1;
  }

  void simulate() {
    std::vector<SearchNode*> path{&root_};
    SearchNode* node = &root_;
    double value;  // for Player::First
    for (;;) {
      if (node->state->terminal()) {
        value = outcome(*node->state, Player::First);
        break;
      }
      if (node->is_chance()) {
        node = &chance_step(*node, rng_);
        path.push_back(node);
        continue;
      }
      if (!node->expanded) {
        value = expand(*node, false);
        break;
      }
      SearchNode& next = node->children[select(*node)];
      if (!next.state) next.state = node->state->apply(next.move);
      node = &next;
      path.push_back(node);
    }
    root_.num_sims += 1;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const Player mover = path[i - 1]->state->to_move();
      path[i]->num_sims += 1;
      path[i]->total_reward += mover == Player::First ? value : -value;
    }
    ++done_;
  }

  void run() {
    while (done_ < config_.simulations) simulate();
  }

  int simulations() const { return done_; }
  const SearchNode& root() const { return root_; }
  const SearchConfig& config() const { return config_; }

  SearchResult result() const {
    SearchResult r;
    const int n = root_.state->action_space().total();
    r.visits.assign(n, 0);
    r.distribution.assign(n, 0.0);
    int best = -1, total = 0;
    double reward = 0;
    for (const auto& c : root_.children) {
      r.visits[c.move] = c.num_sims;
      total += c.num_sims;
      reward += c.total_reward;
      if (best < 0 || c.num_sims > r.visits[best]) best = c.move;
    }
    r.action = best;
    if (total > 0) {
      for (int a = 0; a < n; ++a) r.distribution[a] = double(r.visits[a]) / total;
      r.value = reward / total;
    }
    return r;
  }

 private:
  std::size_t select(const SearchNode& node) const {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const auto& c = node.children[i];
      const double s = config_.mode == Mode::UCT ? uct_score(c.avg_reward(), c.num_sims, node.num_sims, config_.k)
                                                 : puct_score(c.avg_reward(), c.prior, c.num_sims, node.num_sims);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    return best;
  }

  // Creates the children of a decision node and returns its value for
  // Player::First: the network value in PUCT mode, a random playout in UCT.
  double expand(SearchNode& node, bool is_root) {
    auto legal = node.state->legal_actions();
    std::sort(legal.begin(), legal.end());
    std::vector<double> priors(node.state->action_space().total(), 0.0);
    double value;
    if (config_.mode == Mode::PUCT) {
      auto eval = evaluator_->evaluate(*node.state);
      auto p = masked_softmax<float>(std::span<const float>(eval.logits), std::span<const int>(legal),
                                     config_.temperature);
      for (int a : legal) priors[a] = p[a];
      if (is_root && config_.root_noise) {
        add_dirichlet_noise(std::span<double>(priors), std::span<const int>(legal), config_.dirichlet_alpha, config_.dirichlet_epsilon, rng_);
      }
      value = node.state->to_move() == Player::First ? eval.value : -eval.value;
    } else {
      for (int a : legal) priors[a] = 1.0 / double(legal.size());
      value = is_root ? 0.0 : rollout(node.state, rng_);
    }
    node.children.reserve(legal.size());
    for (int a : legal) {
      SearchNode c;
      c.move = a;
      c.prior = priors[a];
      node.children.push_back(std::move(c));
    }
    node.expanded = true;
    return value;
  }

  SearchConfig config_;
  Evaluator* evaluator_;
  Rng rng_;
  SearchNode root_;
  int done_ = 0;
};

inline SearchResult run_search(StatePtr root, const SearchConfig& config, Evaluator* evaluator = nullptr) {
  Search s(std::move(root), config, evaluator);
  s.run();
  return s.result();
}

// Self-play move choice: proportional to visits for the first `sample_plies`
// plies, the most visited move afterwards.
inline int select_move(const SearchResult& r, int ply, int sample_plies, Rng& rng) {
  if (ply >= sample_plies) return r.action;
  return int(std::discrete_distribution<std::size_t>(r.visits.begin(), r.visits.end())(rng));
}

}  // namespace zg::mcts
