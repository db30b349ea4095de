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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zerogames/play/agent.hpp"
#include "zerogames/tournament/elo_pool.hpp"

namespace zg::play {

struct ArenaGame {
  Player a_color = Player::First;
  std::uint64_t seed = 0;
  GameStatus status;
  std::vector<HistoryEntry> history;
};

struct ArenaResult {
  int wins = 0;  // from A's side
  int draws = 0;
  int losses = 0;
  std::vector<ArenaGame> games;

  int played() const { return wins + draws + losses; }
  double score() const { return played() ? (wins + 0.5 * draws) / played() : 0.0; }
  // Logistic ELO of A relative to B; none without games.
  std::optional<double> elo() const {
    if (played() == 0) return std::nullopt;
    return tournament::elo_difference(score());
  }
};

struct ArenaOptions {
  std::uint64_t seed = 0;
  // Uniformly random moves played for both sides before the agents take
  // over. Both games of a pair share the opening, so deterministic engines
  // still meet a spread of positions.
  int opening_plies = 0;
};

inline ArenaGame play_match(StatePtr state, Agent& first, Agent& second, std::uint64_t seed, int opening_plies = 0) {
  ArenaGame g;
  g.seed = seed;
  Rng rng(seed);
  Rng opening(seed ^ 0x5deece66dull);
  RandomAgent random;
  int moves = 0;
  while (!state->terminal()) {
    if (state->is_chance()) {
      auto outcomes = state->chance_outcomes();
      const auto& o = roll(outcomes, rng);
      g.history.push_back(HistoryEntry::of_roll(o.value));
      state = o.successor;
      continue;
    }
    Agent& mover = state->to_move() == Player::First ? first : second;
    const int a = moves++ < opening_plies ? random.choose(state, opening) : mover.choose(state, rng);
    g.history.push_back(HistoryEntry::of(state->action_space().triple(a)));
    state = state->apply(a);
  }
  g.status = state->status();
  return g;
}

// N games with A taking the first seat in even games. Games 2j and 2j+1 share
// a seed, so each pair replays the same randomness with colours swapped.
inline ArenaResult arena(const StatePtr& initial, Agent& a, Agent& b, int games, ArenaOptions options = {},
                         const std::function<void(int, const ArenaResult&)>& progress = {}) {
  ArenaResult r;
  for (int i = 0; i < games; ++i) {
    const bool a_first = i % 2 == 0;
    const std::uint64_t game_seed = options.seed * 1000003ull + std::uint64_t(i / 2);
    auto g = a_first ? play_match(initial, a, b, game_seed, options.opening_plies)
                     : play_match(initial, b, a, game_seed, options.opening_plies);
    g.a_color = a_first ? Player::First : Player::Second;
    if (g.status.kind == GameStatus::Kind::Draw) {
      ++r.draws;
    } else if (g.status.winner == g.a_color) {
      ++r.wins;
    } else {
      ++r.losses;
    }
    r.games.push_back(std::move(g));
    if (progress) progress(i + 1, r);
  }
  return r;
}

class ArenaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arena between two checkpoints on `game` (defaults to A's game id).
inline ArenaResult checkpoint_arena(const nn::Checkpoint& a, const nn::Checkpoint& b, int games, int simulations,
                                    ArenaOptions options = {}, std::string game = {}) {
  if (games::game_family(a.game_id) != games::game_family(b.game_id) || !games::compatible(a.game_id, b.game_id)) {
    throw ArenaError("checkpoints were trained on different games: " + a.game_id + " and " + b.game_id);
  }
  if (game.empty()) game = a.game_id;
  if (!games::compatible(a.game_id, game)) throw ArenaError("checkpoint for " + a.game_id + " cannot play " + game);
  auto ea = EngineAgent::from_checkpoint(a, simulations);
  auto eb = EngineAgent::from_checkpoint(b, simulations);
  return arena(games::make_game(game), ea, eb, games, options);
}

}  // namespace zg::play
