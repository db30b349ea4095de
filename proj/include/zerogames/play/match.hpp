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
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "zerogames/play/agent.hpp"

namespace zg::play {

class MatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownMatchError : public MatchError {
 public:
  using MatchError::MatchError;
};
class IncompatibleCheckpointError : public MatchError {
 public:
  using MatchError::MatchError;
};
class NotYourTurnError : public MatchError {
 public:
  using MatchError::MatchError;
};
class IllegalMoveError : public MatchError {
 public:
  using MatchError::MatchError;
};
class MatchFinishedError : public MatchError {
 public:
  using MatchError::MatchError;
};
// A move submitted for an earlier ply that does not match what was played.
class StaleMoveError : public MatchError {
 public:
  using MatchError::MatchError;
};

struct MatchRequest {
  std::string game;  // full id ("hex9") or a family name combined with `size`
  int size = 0;
  std::string checkpoint;  // empty: the service default
  int simulations = 64;
  Player human = Player::First;
  std::optional<std::uint64_t> seed;
};

struct CellView {
  int row, col;
  std::optional<Player> owner;
  int label;
};

struct MatchView {
  std::string id;
  std::string game_id;
  Player human = Player::First;
  GameStatus status;
  int ply = 0;
  Player to_move = Player::First;
  bool engine_thinking = false;
  ActionSpace space;
  std::vector<CellView> cells;  // on-board cells only
  std::vector<HistoryEntry> history;
  std::vector<int> legal;              // empty unless it is the human's turn
  std::vector<int> engine_visits;      // visit counts of the last engine search
  int engine_simulations = 0;
  std::string board;                   // text rendering
};

// Live human-versus-engine matches. Each match has its own lock; engine moves
// are computed either inline (`async = false`) or on a background thread while
// GET requests report `engine_thinking`.
class MatchService {
 public:
  struct Options {
    std::string default_checkpoint;
    bool async = false;
    std::filesystem::path history_dir;  // when set, each match's moves are written here
    std::uint64_t seed = 0;
    int max_simulations = 100000;
  };

  explicit MatchService(Options options) : options_(std::move(options)) {}
  ~MatchService() { shutdown(); }

  MatchService(const MatchService&) = delete;
  MatchService& operator=(const MatchService&) = delete;

  MatchView create(const MatchRequest& req) {
    const std::string game_id = resolve_game(req);
    auto initial = games::make_game(game_id);
    const std::string path = req.checkpoint.empty() ? options_.default_checkpoint : req.checkpoint;
    std::shared_ptr<const nn::Network<float>> net;
    if (!path.empty()) {
      auto ck = load(path);
      if (!games::compatible(ck->game_id, game_id)) {
        throw IncompatibleCheckpointError("checkpoint trained on " + ck->game_id + " cannot play " + game_id);
      }
      if (ck->network.spec.policy_channels != initial->action_space().channels) {
        throw IncompatibleCheckpointError("checkpoint policy head does not fit " + game_id);
      }
      net = std::shared_ptr<const nn::Network<float>>(ck, &ck->network);
    }
    if (req.simulations < 1 || req.simulations > options_.max_simulations) {
      throw std::invalid_argument("simulations must lie in [1, " + std::to_string(options_.max_simulations) + "]");
    }
    mcts::SearchConfig cfg;
    cfg.simulations = req.simulations;

    auto m = std::make_shared<Match>();
    {
      std::lock_guard lock(mu_);
      m->id = "m" + std::to_string(++next_id_);
    }
    m->game_id = game_id;
    m->human = req.human;
    m->state = initial;
    m->engine = std::make_unique<EngineAgent>(net, cfg);
    m->rng.seed(req.seed.value_or(options_.seed ^ (0x9e3779b97f4a7c15ull * next_id_)));
    std::unique_lock lock(m->mu);
    roll_chance(*m);
    {
      std::lock_guard g(mu_);
      matches_[m->id] = m;
    }
    if (engine_to_move(*m)) start_engine(*m);
    return view(*m);
  }

  MatchView get(const std::string& id) {
    auto m = find(id);
    std::lock_guard lock(m->mu);
    return view(*m);
  }

  // Applies the human move, then lets the engine reply. With `at_ply` set, a
  // repeat of an already applied move returns the current state unchanged.
  MatchView submit(const std::string& id, const Action& action, std::optional<int> at_ply = std::nullopt) {
    auto m = find(id);
    std::unique_lock lock(m->mu);
    if (at_ply && *at_ply != m->state->ply()) {
      if (*at_ply >= 0 && *at_ply < m->state->ply()) {
        if (auto played = move_at_ply(*m, *at_ply); played && *played == action) return view(*m);
      }
      throw StaleMoveError("move for ply " + std::to_string(*at_ply) + " does not match the match at ply " +
                           std::to_string(m->state->ply()));
    }
    if (m->state->terminal()) throw MatchFinishedError("match " + id + " is finished");
    if (m->thinking || m->state->to_move() != m->human) throw NotYourTurnError("it is the engine's turn");
    const auto space = m->state->action_space();
    if (!space.contains(action) || !m->state->is_legal(space.index(action))) {
      throw IllegalMoveError("illegal move (" + std::to_string(action.channel) + "," + std::to_string(action.row) +
                             "," + std::to_string(action.col) + ")");
    }
    apply_move(*m, space.index(action));
    if (engine_to_move(*m)) start_engine(*m);
    return view(*m);
  }

  // Blocks until the engine of match `id` is idle.
  MatchView wait_idle(const std::string& id) {
    auto m = find(id);
    std::unique_lock lock(m->mu);
    m->idle.wait(lock, [&] { return !m->thinking; });
    return view(*m);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return matches_.size();
  }

  void shutdown() {
    std::vector<std::thread> threads;
    {
      std::lock_guard lock(mu_);
      threads.swap(threads_);
    }
    for (auto& t : threads) t.join();
  }

 private:
  struct Match {
    std::mutex mu;
    std::condition_variable idle;
    std::string id;
    std::string game_id;
    Player human = Player::First;
    StatePtr state;
    std::vector<HistoryEntry> history;
    std::vector<int> history_ply;  // ply before each entry; -1 for chance rolls
    std::unique_ptr<EngineAgent> engine;
    std::vector<int> engine_visits;
    bool thinking = false;
    Rng rng;
  };

  std::string resolve_game(const MatchRequest& req) const {
    if (games::parse_game_id(req.game)) {
      const auto family = games::game_family(req.game);
      if (req.size > 0 && family != "connect" && family != "ewn") return games::game_id_for(family, req.size);
      return req.game;
    }
    for (const auto& g : games::list_games()) {
      if (g.family == req.game) {
        if (g.family == "connect") throw games::UnknownGameError("connect games need a full id such as connect4x4k3");
        if (g.family != "ewn" && req.size <= 0) throw games::InvalidBoardSizeError("board size required for " + g.family);
        return games::game_id_for(g.family, req.size);
      }
    }
    throw games::UnknownGameError("unknown game '" + req.game + "'");
  }

  std::shared_ptr<const nn::Checkpoint> load(const std::string& path) {
    std::lock_guard lock(mu_);
    if (auto it = checkpoints_.find(path); it != checkpoints_.end()) return it->second;
    auto ck = std::make_shared<const nn::Checkpoint>(nn::load_checkpoint(path));
    checkpoints_[path] = ck;
    return ck;
  }

  std::shared_ptr<Match> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = matches_.find(id);
    if (it == matches_.end()) throw UnknownMatchError("no match " + id);
    return it->second;
  }

  static bool engine_to_move(const Match& m) {
    return !m.state->terminal() && !m.state->is_chance() && m.state->to_move() != m.human;
  }

  static std::optional<Action> move_at_ply(const Match& m, int ply) {
    for (std::size_t i = 0; i < m.history.size(); ++i) {
      if (m.history_ply[i] == ply) return m.history[i].action;
    }
    return std::nullopt;
  }

  void apply_move(Match& m, int action) {
    m.history.push_back(HistoryEntry::of(m.state->action_space().triple(action)));
    m.history_ply.push_back(m.state->ply());
    m.state = m.state->apply(action);
    roll_chance(m);
    persist(m);
  }

  static void roll_chance(Match& m) {
    while (m.state->is_chance()) {
      auto outcomes = m.state->chance_outcomes();
      const auto& o = roll(outcomes, m.rng);
      m.history.push_back(HistoryEntry::of_roll(o.value));
      m.history_ply.push_back(-1);
      m.state = o.successor;
    }
  }

  void engine_move(Match& m) {
    const int a = m.engine->choose(m.state, m.rng);
    m.engine_visits = m.engine->last_search()->visits;
    apply_move(m, a);
  }

  // Called with the match lock held.
  void start_engine(Match& m) {
    if (!options_.async) {
      while (engine_to_move(m)) engine_move(m);
      return;
    }
    m.thinking = true;
    auto self = find(m.id);
    std::lock_guard g(mu_);
    threads_.emplace_back([this, self] {
      std::unique_lock l(self->mu);
      try {
        while (engine_to_move(*self)) {
          // Search without holding the lock so GET requests stay responsive.
          auto state = self->state;
          auto rng = self->rng;
          l.unlock();
          const int a = self->engine->choose(state, rng);
          l.lock();
          self->rng = rng;
          self->engine_visits = self->engine->last_search()->visits;
          apply_move(*self, a);
        }
      } catch (const std::exception&) {
        // Leave the position as it is; the client sees the engine idle.
      }
      self->thinking = false;
      self->idle.notify_all();
    });
  }

  void persist(const Match& m) const {
    if (options_.history_dir.empty()) return;
    std::filesystem::create_directories(options_.history_dir);
    std::ofstream f(options_.history_dir / (m.id + ".txt"), std::ios::trunc);
    f << "# " << m.game_id << " human=" << to_string(m.human) << '\n';
    write_history(f, m.history);
  }

  MatchView view(const Match& m) const {
    MatchView v;
    v.id = m.id;
    v.game_id = m.game_id;
    v.human = m.human;
    v.status = m.state->status();
    v.ply = m.state->ply();
    v.to_move = m.state->to_move();
    v.engine_thinking = m.thinking;
    v.space = m.state->action_space();
    for (int r = 0; r < m.state->height(); ++r) {
      for (int c = 0; c < m.state->width(); ++c) {
        if (m.state->on_board(r, c)) v.cells.push_back({r, c, m.state->cell_owner(r, c), m.state->cell_label(r, c)});
      }
    }
    v.history = m.history;
    if (!m.thinking && !m.state->terminal() && !m.state->is_chance() && m.state->to_move() == m.human) {
      v.legal = m.state->legal_actions();
    }
    v.engine_visits = m.engine_visits;
    v.engine_simulations = m.engine->config().simulations;
    v.board = m.state->to_string();
    return v;
  }

  Options options_;
  mutable std::mutex mu_;  // matches_, checkpoints_, threads_, next_id_
  std::map<std::string, std::shared_ptr<Match>> matches_;
  std::map<std::string, std::shared_ptr<const nn::Checkpoint>> checkpoints_;
  std::vector<std::thread> threads_;
  std::uint64_t next_id_ = 0;
};

}  // namespace zg::play
