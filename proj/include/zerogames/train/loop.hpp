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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "zerogames/games/registry.hpp"
#include "zerogames/nn/checkpoint.hpp"
#include "zerogames/nn/loss.hpp"
#include "zerogames/nn/sgd.hpp"
#include "zerogames/tournament/elo_pool.hpp"
#include "zerogames/train/config.hpp"
#include "zerogames/train/replay.hpp"
#include "zerogames/train/selfplay.hpp"
#include "zerogames/train/wire.hpp"

namespace zg::train {

struct TrainStats {
  std::uint64_t steps = 0;
  std::uint64_t games = 0;
  std::uint64_t samples = 0;
  std::uint64_t abandoned = 0;
  std::uint64_t pool_games = 0;
  std::uint64_t worker_errors = 0;
  std::uint64_t starved_waits = 0;
  double last_loss = 0.0;
  std::vector<std::filesystem::path> checkpoints;
};

inline std::string checkpoint_name(std::uint64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ckpt_%08llu.zgn", static_cast<unsigned long long>(step));
  return buf;
}

inline nn::NetworkSpec spec_for(const TrainLoopConfig& c, const GameState& game) {
  nn::NetworkSpec s;
  s.input_channels = kFeaturePlanes;
  s.trunk_channels = c.trunk_channels;
  s.residual_blocks = c.residual_blocks;
  s.kernel_size = c.kernel_size;
  s.policy_channels = game.action_space().channels;
  s.value_pool_channels = c.value_pool_channels;
  s.value_hidden = c.value_hidden;
  return s;
}

// Self-play workers feed the replay buffer; the trainer draws batches, takes
// SGD steps, writes a checkpoint every `checkpoint_interval` steps and admits
// it to the ELO pool. Each game pits the dev model against a pool member
// (with probability `pool_game_fraction`) or against itself.
class TrainLoop {
 public:
  using Net = nn::Network<float>;

  explicit TrainLoop(TrainLoopConfig config, std::ostream* log = nullptr)
      : config_(std::move(config)), log_(log), buffer_(std::size_t(validated(config_).buffer_capacity)) {
    initial_ = games::make_game(config_.game);
    if (!config_.init_checkpoint.empty()) {
      auto ck = nn::load_checkpoint(config_.init_checkpoint);
      if (!games::compatible(ck.game_id, config_.game)) {
        throw ConfigError("checkpoint trained on " + ck.game_id + " cannot train " + config_.game);
      }
      dev_ = std::move(ck.network);
      step_ = ck.step;
    } else {
      dev_ = Net::random(spec_for(config_, *initial_), config_.seed);
    }
    if (dev_.spec.policy_channels != initial_->action_space().channels) {
      throw ConfigError("network policy head does not fit " + config_.game);
    }
    published_ = std::make_shared<const Net>(dev_);
    dev_spec_hash_ = dev_.spec.hash();
    std::filesystem::create_directories(config_.out_dir);
    save_checkpoint_locked();
  }

  TrainStats run() {
    if (config_.synchronous) {
      run_synchronous();
    } else {
      run_threaded();
    }
    {
      std::lock_guard lock(mu_);
      nn::save_checkpoint({config_.game, dev_, step_, pool_.dev_rating()}, final_path());
    }
    return stats();
  }

  void request_stop() {
    stop_ = true;
    wake_.notify_all();
  }

  TrainStats stats() const {
    std::lock_guard lock(mu_);
    return stats_;
  }
  const ReplayBuffer& buffer() const { return buffer_; }
  const tournament::EloPool& pool() const { return pool_; }
  std::shared_ptr<const Net> dev() const {
    std::lock_guard lock(mu_);
    return published_;
  }
  std::filesystem::path final_path() const { return std::filesystem::path(config_.out_dir) / "final.zgn"; }

  // One game against an opponent picked from the pool. Pushes the dev
  // model's samples and records the result.
  void play_one(mcts::Rng& rng) {
    auto dev = this->dev();
    std::optional<tournament::RatedCheckpoint> rival;
    if (std::uniform_real_distribution<double>(0, 1)(rng) < config_.pool_game_fraction) {
      rival = pool_.select_opponent(rng);
    }
    std::shared_ptr<const Net> opp_net = dev;
    if (rival) {
      std::lock_guard lock(mu_);
      if (auto it = members_.find(rival->id); it != members_.end()) {
        opp_net = it->second;
      } else {
        rival.reset();  // evicted meanwhile
      }
    }
    mcts::NetworkEvaluator dev_eval(dev), opp_eval(opp_net);
    const std::uint64_t game_no = games_started_++;
    const Player dev_color = game_no % 2 == 0 ? Player::First : Player::Second;
    std::array<mcts::Evaluator*, 2> players{&dev_eval, &dev_eval};
    std::array<bool, 2> record{true, true};
    if (rival) {
      players[index_of(opponent(dev_color))] = &opp_eval;
      record[index_of(opponent(dev_color))] = false;
    }
    SelfPlayConfig sp;
    sp.search.simulations = config_.simulations;
    sp.search.dirichlet_alpha = config_.dirichlet_alpha;
    sp.search.dirichlet_epsilon = config_.dirichlet_epsilon;
    sp.sample_plies = config_.sample_plies;
    auto game = play_game(initial_, players, record, sp, rng);
    const auto produced = game.samples.size();
    for (auto& s : game.samples) buffer_.push(std::move(s));
    std::lock_guard lock(mu_);
    ++stats_.games;
    stats_.samples += produced;
    if (game.abandoned) {
      ++stats_.abandoned;
      return;
    }
    if (rival) {
      ++stats_.pool_games;
      const int r = outcome_for(game.status, dev_color);
      const auto result = r > 0 ? tournament::GameResult::Win : r < 0 ? tournament::GameResult::Loss
                                                                     : tournament::GameResult::Draw;
      try {
        pool_.record_result(rival->id, result);
      } catch (const tournament::UnknownMemberError&) {
        // evicted while the game was running
      }
    }
  }

  // Samples produced by an out-of-process worker. Records for another game or
  // network shape are rejected.
  void ingest(const SampleRecord& rec) {
    if (!games::compatible(rec.game_id, config_.game) || games::game_family(rec.game_id) != games::game_family(config_.game)) {
      throw WireError("record for " + rec.game_id + " sent to a " + config_.game + " trainer");
    }
    if (rec.spec_hash != dev_spec_hash_) throw WireError("record produced by a different network shape");
    for (const auto& s : rec.samples) buffer_.push(s);
    std::lock_guard lock(mu_);
    stats_.samples += rec.samples.size();
  }

  // One SGD step if a batch is available; false when starved.
  bool train_step(mcts::Rng& rng) {
    auto batch = buffer_.sample_batch(std::size_t(config_.batch_size), rng);
    if (!batch) return false;
    std::lock_guard lock(mu_);
    auto grads = nn::Weights<float>::zeros(dev_.spec);
    const auto loss = nn::batch_loss<float, Sample>(dev_, *batch, config_.weight_decay, &grads);
    try {
      nn::clip_grad_norm(grads, config_.grad_clip);
      nn::sgd_step(dev_.weights, grads, config_.learning_rate);
    } catch (const nn::NonFiniteGradientError& e) {
      if (log_) *log_ << "skipping batch: " << e.what() << std::endl;
      return true;
    }
    ++step_;
    ++stats_.steps;
    stats_.last_loss = loss.total();
    published_ = std::make_shared<const Net>(dev_);
    if (step_ % std::uint64_t(config_.checkpoint_interval) == 0) save_checkpoint_locked();
    return true;
  }

 private:
  static const TrainLoopConfig& validated(const TrainLoopConfig& c) {
    c.validate();
    return c;
  }

  static int outcome_for(const GameStatus& s, Player p) {
    if (s.kind == GameStatus::Kind::Draw) return 0;
    return s.winner == p ? 1 : -1;
  }

  bool steps_done() const {
    std::lock_guard lock(mu_);
    return config_.max_steps > 0 && stats_.steps >= std::uint64_t(config_.max_steps);
  }
  bool games_done() const {
    std::lock_guard lock(mu_);
    return config_.max_games > 0 && stats_.games >= std::uint64_t(config_.max_games);
  }

  void run_synchronous() {
    mcts::Rng rng(config_.seed);
    while (!stop_ && !steps_done() && !games_done()) {
      play_one(rng);
      while (!stop_ && !steps_done() && train_step(rng)) {
      }
    }
  }

  void run_threaded() {
    std::vector<std::thread> workers;
    for (int w = 0; w < config_.workers; ++w) {
      workers.emplace_back([this, w] {
        mcts::Rng rng(config_.seed + 0x9e3779b97f4a7c15ull * std::uint64_t(w + 1));
        while (!stop_ && !games_claimed()) {
          try {
            play_one(rng);
          } catch (const std::exception& e) {
            // The worker carries on with a fresh game.
            std::lock_guard lock(mu_);
            ++stats_.worker_errors;
            if (log_) *log_ << "worker " << w << " failed: " << e.what() << std::endl;
          }
        }
      });
    }
    mcts::Rng rng(config_.seed);
    Backoff backoff;
    while (!stop_ && !steps_done()) {
      if (train_step(rng)) {
        backoff.reset();
        continue;
      }
      // Starved. Once every game has been played the run is over.
      if (config_.workers > 0 && games_done()) break;
      {
        std::lock_guard lock(mu_);
        ++stats_.starved_waits;
      }
      std::unique_lock lock(wait_mu_);
      wake_.wait_for(lock, backoff.next(), [&] { return stop_.load(); });
    }
    stop_ = true;
    for (auto& t : workers) t.join();
  }

  bool games_claimed() const {
    return config_.max_games > 0 && games_started_.load() >= std::uint64_t(config_.max_games);
  }

  void save_checkpoint_locked() {
    const auto name = checkpoint_name(step_);
    const auto path = std::filesystem::path(config_.out_dir) / name;
    nn::save_checkpoint({config_.game, dev_, step_, pool_.dev_rating()}, path);
    stats_.checkpoints.push_back(path);
    if (!pool_.find(name)) {
      if (auto removed = pool_.admit(name)) members_.erase(removed->id);
      members_[name] = std::make_shared<const Net>(dev_);
    }
    pool_.save(std::filesystem::path(config_.out_dir) / "pool.txt");
    if (log_) {
      *log_ << "step " << step_ << " games " << stats_.games << " loss " << stats_.last_loss << " dev elo "
            << pool_.dev_rating() << " -> " << name << std::endl;
    }
  }

  TrainLoopConfig config_;
  std::ostream* log_;
  ReplayBuffer buffer_;
  tournament::EloPool pool_;
  StatePtr initial_;

  mutable std::mutex mu_;  // dev_, published_, members_, stats_, step_
  Net dev_{nn::NetworkSpec{}};
  std::shared_ptr<const Net> published_;
  std::map<std::string, std::shared_ptr<const Net>> members_;
  TrainStats stats_;
  std::uint64_t step_ = 0;
  std::uint64_t dev_spec_hash_ = 0;

  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> games_started_{0};
  std::mutex wait_mu_;
  std::condition_variable wake_;
};

}  // namespace zg::train
