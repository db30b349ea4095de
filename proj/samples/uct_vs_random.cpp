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

// Plain UCT (random playouts, no network) against a uniform-random player.
//
//   uct_vs_random [game-id] [simulations]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "zerogames/games/registry.hpp"
#include "zerogames/play/agent.hpp"

int main(int argc, char** argv) {
  const std::string id = argc > 1 ? argv[1] : "hex5";
  zg::mcts::SearchConfig cfg;
  cfg.simulations = argc > 2 ? std::atoi(argv[2]) : 400;

  zg::StatePtr state;
  try {
    state = zg::games::make_game(id);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  zg::play::EngineAgent engine(nullptr, cfg, "uct");
  zg::play::RandomAgent random;
  zg::mcts::Rng rng(42);
  while (!state->terminal()) {
    if (state->is_chance()) {
      state = zg::play::roll(state->chance_outcomes(), rng).successor;
      continue;
    }
    auto& agent = state->to_move() == zg::Player::First ? static_cast<zg::play::Agent&>(engine) : random;
    const int a = agent.choose(state, rng);
    std::printf("ply %d: %s plays %d\n", state->ply(), agent.name().c_str(), a);
    state = state->apply(a);
  }
  std::printf("%s\n", state->to_string().c_str());
  const auto st = state->status();
  if (st.kind == zg::GameStatus::Kind::Draw) {
    std::printf("draw\n");
  } else {
    std::printf("%s wins\n", st.winner == zg::Player::First ? "uct" : "random");
  }
}
