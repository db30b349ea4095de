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

// A short self-play run on Connect-3 3x3, then the result against random.
//
//   tiny_training [output-dir]

#include <cstdio>
#include <iostream>
#include <memory>

#include "zerogames/play/arena.hpp"
#include "zerogames/train/loop.hpp"

int main(int argc, char** argv) {
  zg::train::TrainLoopConfig cfg;
  cfg.game = "connect3x3k3";
  cfg.trunk_channels = 8;
  cfg.residual_blocks = 1;
  cfg.simulations = 32;
  cfg.batch_size = 32;
  cfg.learning_rate = 0.05;
  cfg.buffer_capacity = 4096;
  cfg.checkpoint_interval = 100;
  cfg.max_games = 200;
  cfg.synchronous = true;
  cfg.out_dir = argc > 1 ? argv[1] : "tiny_run";

  zg::train::TrainLoop loop(cfg, &std::cout);
  const auto stats = loop.run();
  std::printf("%llu games, %llu steps, last loss %.3f\n", (unsigned long long)stats.games,
              (unsigned long long)stats.steps, stats.last_loss);

  auto ck = zg::nn::load_checkpoint(loop.final_path());
  auto engine = zg::play::EngineAgent::from_checkpoint(ck, 32);
  zg::play::RandomAgent random;
  const auto r = zg::play::arena(zg::games::make_game(cfg.game), engine, random, 50, {1, 0});
  std::printf("vs random: %d wins, %d draws, %d losses\n", r.wins, r.draws, r.losses);
}
