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
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zerogames/game.hpp"

namespace zg::games {

// Gravity board. Row 0 is the bottom; a dropped piece lands on the lowest
// empty row of its column.
class ConnectBoard {
 public:
  ConnectBoard(int width, int height, int k)
      : width_(width), height_(height), k_(k), cells_(std::size_t(width) * height), heights_(width, 0) {
    if (width < 1 || height < 1 || k < 1) throw GameError("connect board dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int k() const { return k_; }
  std::optional<Player> at(int r, int c) const { return cells_[std::size_t(r) * width_ + c]; }
  int column_height(int c) const { return heights_[c]; }
  bool column_full(int c) const { return heights_[c] >= height_; }
  bool full() const {
    for (int c = 0; c < width_; ++c) {
      if (!column_full(c)) return false;
    }
    return true;
  }

  // Returns the landing row.
  int drop(int c, Player p) {
    if (c < 0 || c >= width_ || column_full(c)) throw GameError("column " + std::to_string(c) + " is full");
    const int r = heights_[c]++;
    cells_[std::size_t(r) * width_ + c] = p;
    return r;
  }

  friend bool operator==(const ConnectBoard&, const ConnectBoard&) = default;

 private:
  int width_, height_, k_;
  std::vector<std::optional<Player>> cells_;
  std::vector<int> heights_;
};

inline GameStatus connect_winner(const ConnectBoard& b) {
  static constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (int r = 0; r < b.height(); ++r) {
    for (int c = 0; c < b.width(); ++c) {
      const auto p = b.at(r, c);
      if (!p) continue;
      for (auto [dr, dc] : kDirs) {
        int len = 1;
        while (len < b.k()) {
          const int nr = r + dr * len, nc = c + dc * len;
          if (nr < 0 || nr >= b.height() || nc < 0 || nc >= b.width() || b.at(nr, nc) != p) break;
          ++len;
        }
        if (len >= b.k()) return GameStatus::win(*p);
      }
    }
  }
  return b.full() ? GameStatus::draw() : GameStatus::ongoing();
}

// Actions are the landing cells (channel 0, row, col), so the policy head
// stays spatial.
class ConnectState final : public GameState {
 public:
  ConnectState(int width, int height, int k) : board_(width, height, k) {}

  std::string game_id() const override {
    return "connect" + std::to_string(board_.width()) + "x" + std::to_string(board_.height()) + "k" +
           std::to_string(board_.k());
  }
  ActionSpace action_space() const override { return {1, board_.height(), board_.width()}; }
  int ply() const override { return ply_; }
  Player to_move() const override { return ply_ % 2 == 0 ? Player::First : Player::Second; }
  GameStatus status() const override { return status_; }
  std::optional<Player> cell_owner(int r, int c) const override { return board_.at(r, c); }

  const ConnectBoard& board() const { return board_; }
  int action_for_column(int c) const { return board_.column_height(c) * board_.width() + c; }

  std::string to_string() const override {
    std::ostringstream os;
    for (int r = board_.height() - 1; r >= 0; --r) {
      for (int c = 0; c < board_.width(); ++c) {
        const auto p = board_.at(r, c);
        os << (p ? (*p == Player::First ? 'X' : 'O') : '.') << ' ';
      }
      os << '\n';
    }
    for (int c = 0; c < board_.width(); ++c) os << c << ' ';
    os << '\n';
    return os.str();
  }

 protected:
  std::vector<int> compute_legal_actions() const override {
    std::vector<int> out;
    for (int c = 0; c < board_.width(); ++c) {
      if (!board_.column_full(c)) out.push_back(action_for_column(c));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool check_legal(int action) const override {
    const int c = action % board_.width(), r = action / board_.width();
    return !board_.column_full(c) && board_.column_height(c) == r;
  }

  StatePtr do_apply(int action) const override {
    auto next = std::make_shared<ConnectState>(*this);
    next->board_.drop(action % board_.width(), to_move());
    next->ply_ += 1;
    next->status_ = connect_winner(next->board_);
    return next;
  }

 private:
  ConnectBoard board_;
  int ply_ = 0;
  GameStatus status_;
};

}  // namespace zg::games
