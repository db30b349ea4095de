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
#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "zerogames/game.hpp"
#include "zerogames/mcts/search.hpp"
#include "zerogames/train/replay.hpp"

namespace zg::train {

struct SelfPlayConfig {
  mcts::SearchConfig search;  // PUCT; root noise is switched on per move
  int sample_plies = 8;       // visit-proportional move choice before this many moves
  int move_cap_factor = 10;   // abandon after factor * cells moves
};

struct GameRecord {
  std::vector<Sample> samples;
  std::vector<HistoryEntry> history;
  GameStatus status;
  int moves = 0;
  bool abandoned = false;
};

// Visit distribution laid out like the network's policy tensor for `s`.
inline Tensor<float> visit_tensor(const GameState& s, const std::vector<double>& distribution) {
  const auto space = s.action_space();
  const bool tr = s.transposed_view();
  Tensor<float> t({std::size_t(space.channels), std::size_t(tr ? space.width : space.height),
                   std::size_t(tr ? space.height : space.width)});
  for (std::size_t a = 0; a < distribution.size(); ++a) t[s.view_index(int(a))] = float(distribution[a]);
  return t;
}

// Legal actions as policy-tensor indices.
inline std::vector<int> view_legal(const GameState& s) {
  auto legal = s.legal_actions();
  for (int& a : legal) a = s.view_index(a);
  std::sort(legal.begin(), legal.end());
  return legal;
}

// Plays one game, `players[0]` moving for Player::First. Samples are taken at
// the decision states of the sides flagged in `record`; rewards are filled in
// from each mover's point of view once the game ends. Games that exceed the
// move cap are abandoned and yield no samples.
inline GameRecord play_game(StatePtr state, std::array<mcts::Evaluator*, 2> players, std::array<bool, 2> record,
                            const SelfPlayConfig& config, mcts::Rng& rng) {
  GameRecord out;
  std::vector<Player> movers;
  const int cap = config.move_cap_factor * state->height() * state->width();
  while (!state->terminal()) {
    if (state->is_chance()) {
      auto outcomes = state->chance_outcomes();
      std::vector<double> w;
      for (const auto& o : outcomes) w.push_back(o.probability);
      const auto& o = outcomes[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)];
      out.history.push_back(HistoryEntry::of_roll(o.value));
      state = o.successor;
      continue;
    }
    if (out.moves >= cap) {
      out.abandoned = true;
      out.samples.clear();
      out.status = state->status();
      return out;
    }
    const Player mover = state->to_move();
    auto cfg = config.search;
    cfg.mode = mcts::Mode::PUCT;
    cfg.root_noise = true;
    cfg.seed = rng();
    const auto result = mcts::run_search(state, cfg, players[index_of(mover)]);
    if (record[index_of(mover)]) {
      Sample s;
      s.state = state->encode();
      s.policy = visit_tensor(*state, result.distribution);
      s.legal = view_legal(*state);
      out.samples.push_back(std::move(s));
      movers.push_back(mover);
    }
    const int action = mcts::select_move(result, out.moves, config.sample_plies, rng);
    out.history.push_back(HistoryEntry::of(state->action_space().triple(action)));
    state = state->apply(action);
    ++out.moves;
  }
  out.status = state->status();
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i].reward = float(outcome(*state, movers[i]));
  return out;
}

// Both sides played by the same model; every decision state is recorded.
inline GameRecord self_play_game(StatePtr initial, mcts::Evaluator& model, const SelfPlayConfig& config,
                                 mcts::Rng& rng) {
  return play_game(std::move(initial), {&model, &model}, {true, true}, config, rng);
}

}  // namespace zg::train
