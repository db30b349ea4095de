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
#include <cstdlib>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zerogames/game.hpp"

namespace zg::games {

// Einstein Wurfelt Nicht on 5x5. First's pieces start in the top-left
// triangle and head for (4,4); Second's start bottom-right and head for (0,0).
// A die roll names the piece to move; if it was captured, the next lower or
// next higher surviving piece may move instead. Moving onto any piece captures
// it. Reaching the opposite corner or capturing every enemy piece wins.
//
// Chance nodes (a roll is pending) alternate with decision nodes. Actions are
// (direction, row, col) with (row, col) the source cell and direction 0 =
// horizontal, 1 = vertical, 2 = diagonal, always toward the mover's goal.
class EwnState final : public GameState {
 public:
  static constexpr int kSize = 5;
  static constexpr int kPieces = 6;

  EwnState() {
    static constexpr int kStart[kPieces][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}};
    for (int i = 0; i < kPieces; ++i) {
      const auto [r, c] = kStart[i];
      board_[idx(r, c)] = static_cast<std::int8_t>(i + 1);
      board_[idx(kSize - 1 - r, kSize - 1 - c)] = static_cast<std::int8_t>(-(i + 1));
    }
  }

  std::string game_id() const override { return "ewn"; }
  ActionSpace action_space() const override { return {3, kSize, kSize}; }
  int ply() const override { return ply_; }
  Player to_move() const override { return to_move_; }
  bool is_chance() const override { return die_ == 0 && !status_.terminal(); }
  GameStatus status() const override { return status_; }
  std::optional<Player> cell_owner(int r, int c) const override {
    const int v = board_[idx(r, c)];
    if (v == 0) return std::nullopt;
    return v > 0 ? Player::First : Player::Second;
  }
  int cell_label(int r, int c) const override { return std::abs(board_[idx(r, c)]); }

  int die() const { return die_; }

  // Piece numbers the mover may move for the current roll.
  std::vector<int> movable_pieces() const {
    if (die_ == 0) throw GameError("no die value at a chance node");
    return movable_for(to_move_, die_);
  }

  std::vector<int> movable_for(Player p, int roll) const {
    std::array<bool, kPieces + 1> alive{};
    for (auto v : board_) {
      if (v != 0 && (v > 0) == (p == Player::First)) alive[std::abs(v)] = true;
    }
    if (alive[roll]) return {roll};
    std::vector<int> out;
    for (int lo = roll - 1; lo >= 1; --lo) {
      if (alive[lo]) {
        out.push_back(lo);
        break;
      }
    }
    for (int hi = roll + 1; hi <= kPieces; ++hi) {
      if (alive[hi]) {
        out.push_back(hi);
        break;
      }
    }
    return out;
  }

  std::optional<std::array<int, 2>> piece_position(Player p, int number) const {
    const int v = p == Player::First ? number : -number;
    for (int i = 0; i < kSize * kSize; ++i) {
      if (board_[i] == v) return std::array<int, 2>{i / kSize, i % kSize};
    }
    return std::nullopt;
  }

  // Test and tooling hook: a decision or chance node from an explicit layout.
  // Positive entries are First's pieces, negative Second's.
  static std::shared_ptr<EwnState> from_layout(const std::array<std::int8_t, kSize * kSize>& layout,
                                               Player to_move, int die) {
    auto s = std::make_shared<EwnState>();
    s->board_ = layout;
    s->to_move_ = to_move;
    s->die_ = die;
    s->status_ = s->evaluate(opponent(to_move));
    return s;
  }

  std::string to_string() const override {
    std::ostringstream os;
    for (int r = 0; r < kSize; ++r) {
      for (int c = 0; c < kSize; ++c) {
        const int v = board_[idx(r, c)];
        os << (v == 0 ? '.' : v > 0 ? char('0' + v) : char('A' + (-v - 1))) << ' ';
      }
      os << '\n';
    }
    if (die_) os << "die: " << die_ << '\n';
    return os.str();
  }

 protected:
  std::vector<int> compute_legal_actions() const override {
    std::vector<int> out;
    const auto space = action_space();
    for (int piece : movable_pieces()) {
      const auto pos = piece_position(to_move_, piece);
      for (int d = 0; d < 3; ++d) {
        const auto [dr, dc] = step(to_move_, d);
        const int nr = (*pos)[0] + dr, nc = (*pos)[1] + dc;
        if (nr < 0 || nr >= kSize || nc < 0 || nc >= kSize) continue;
        out.push_back(space.index({d, (*pos)[0], (*pos)[1]}));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  StatePtr do_apply(int action) const override {
    const Action a = action_space().triple(action);
    const auto [dr, dc] = step(to_move_, a.channel);
    auto next = std::make_shared<EwnState>(*this);
    next->board_[idx(a.row + dr, a.col + dc)] = board_[idx(a.row, a.col)];
    next->board_[idx(a.row, a.col)] = 0;
    next->ply_ += 1;
    next->die_ = 0;
    next->status_ = next->evaluate(to_move_);
    next->to_move_ = opponent(to_move_);
    return next;
  }

  std::vector<ChanceOutcome> compute_chance_outcomes() const override {
    std::vector<ChanceOutcome> out;
    for (int v = 1; v <= kPieces; ++v) {
      auto next = std::make_shared<EwnState>(*this);
      next->die_ = v;
      out.push_back({v, 1.0 / kPieces, std::move(next)});
    }
    return out;
  }

 private:
  static constexpr int idx(int r, int c) { return r * kSize + c; }

  static std::array<int, 2> step(Player p, int direction) {
    static constexpr int kSteps[3][2] = {{0, 1}, {1, 0}, {1, 1}};
    const int sign = p == Player::First ? 1 : -1;
    return {sign * kSteps[direction][0], sign * kSteps[direction][1]};
  }

  // Status after `mover` has just moved.
  GameStatus evaluate(Player mover) const {
    for (Player p : {mover, opponent(mover)}) {
      const int goal = p == Player::First ? idx(kSize - 1, kSize - 1) : idx(0, 0);
      const int v = board_[goal];
      if (v != 0 && (v > 0) == (p == Player::First)) return GameStatus::win(p);
    }
    int first = 0, second = 0;
    for (auto v : board_) {
      first += v > 0;
      second += v < 0;
    }
    if (first == 0) return GameStatus::win(Player::Second);
    if (second == 0) return GameStatus::win(Player::First);
    return GameStatus::ongoing();
  }

  std::array<std::int8_t, kSize * kSize> board_{};
  Player to_move_ = Player::First;
  int die_ = 0;
  int ply_ = 0;
  GameStatus status_;
};

}  // namespace zg::games
