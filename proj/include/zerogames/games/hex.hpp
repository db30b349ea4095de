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
#include <sstream>
#include <string>
#include <vector>

#include "zerogames/game.hpp"
#include "zerogames/games/stone.hpp"
#include "zerogames/games/union_find.hpp"

namespace zg::games {

// Rhombus Hex board. Black connects North (row 0) to South (row N-1); White
// connects West (col 0) to East (col N-1).
class HexBoard {
 public:
  explicit HexBoard(int size) : size_(size), cells_(std::size_t(size) * size, Stone::Empty) {
    if (size < 1) throw GameError("hex board size must be at least 1");
  }

  int size() const { return size_; }
  bool contains(int r, int c) const { return r >= 0 && r < size_ && c >= 0 && c < size_; }
  Stone at(int r, int c) const { return cells_[std::size_t(r) * size_ + c]; }
  void set(int r, int c, Stone s) { cells_[std::size_t(r) * size_ + c] = s; }
  int cell_index(int r, int c) const { return r * size_ + c; }
  int num_cells() const { return size_ * size_; }
  bool full() const {
    for (auto s : cells_) {
      if (s == Stone::Empty) return false;
    }
    return true;
  }

  // Union-find layout: cells first, then four virtual edge nodes.
  int north() const { return num_cells(); }
  int south() const { return num_cells() + 1; }
  int west() const { return num_cells() + 2; }
  int east() const { return num_cells() + 3; }

  // Links the stone at (r,c) to same-coloured neighbours and to its edges.
  void link(UnionFind& uf, int r, int c) const {
    const Stone s = at(r, c);
    const int id = cell_index(r, c);
    for (auto [dr, dc] : kHexNeighbors) {
      const int nr = r + dr, nc = c + dc;
      if (contains(nr, nc) && at(nr, nc) == s) uf.unite(id, cell_index(nr, nc));
    }
    if (s == Stone::Black) {
      if (r == 0) uf.unite(id, north());
      if (r == size_ - 1) uf.unite(id, south());
    } else if (s == Stone::White) {
      if (c == 0) uf.unite(id, west());
      if (c == size_ - 1) uf.unite(id, east());
    }
  }

  std::optional<Stone> winner_in(UnionFind& uf) const {
    if (uf.connected(north(), south())) return Stone::Black;
    if (uf.connected(west(), east())) return Stone::White;
    return std::nullopt;
  }

  friend bool operator==(const HexBoard&, const HexBoard&) = default;

 private:
  int size_;
  std::vector<Stone> cells_;
};

inline std::optional<Stone> hex_winner(const HexBoard& board) {
  UnionFind uf(board.num_cells() + 4);
  for (int r = 0; r < board.size(); ++r) {
    for (int c = 0; c < board.size(); ++c) {
      if (board.at(r, c) != Stone::Empty) board.link(uf, r, c);
    }
  }
  return board.winner_in(uf);
}

// Color bookkeeping under the pie rule: First starts as Black; after a swap
// the players exchange colors and the board is left untouched.
struct PieColors {
  bool swapped = false;
  Stone color_of(Player p) const {
    const bool black = (p == Player::First) != swapped;
    return black ? Stone::Black : Stone::White;
  }
  Player owner_of(Stone s) const {
    const bool first = (s == Stone::Black) != swapped;
    return first ? Player::First : Player::Second;
  }
};

class HexState final : public GameState {
 public:
  explicit HexState(int size, bool pie_rule = true)
      : board_(size), uf_(board_.num_cells() + 4), pie_rule_(pie_rule) {}

  std::string game_id() const override { return "hex" + std::to_string(board_.size()); }
  ActionSpace action_space() const override { return {2, board_.size(), board_.size()}; }
  int ply() const override { return ply_; }
  Player to_move() const override { return colors_.owner_of(color_to_move()); }
  GameStatus status() const override {
    if (!winner_) return GameStatus::ongoing();
    return GameStatus::win(colors_.owner_of(*winner_));
  }
  std::optional<Player> cell_owner(int r, int c) const override {
    const Stone s = board_.at(r, c);
    if (s == Stone::Empty) return std::nullopt;
    return colors_.owner_of(s);
  }

  const HexBoard& board() const { return board_; }
  bool swapped() const { return colors_.swapped; }
  Stone color_of(Player p) const { return colors_.color_of(p); }
  Stone color_to_move() const { return stones_ % 2 == 0 ? Stone::Black : Stone::White; }
  // White joins West to East; seen transposed it joins top to bottom like Black.
  bool transposed_view() const override { return color_to_move() == Stone::White; }
  int swap_action() const { return action_space().index({1, 0, 0}); }

  std::string to_string() const override {
    std::ostringstream os;
    const int n = board_.size();
    os << "  ";
    for (int c = 0; c < n; ++c) os << ' ' << char('a' + c);
    os << '\n';
    for (int r = 0; r < n; ++r) {
      os << std::string(std::size_t(r), ' ') << (r < 9 ? " " : "") << r + 1;
      for (int c = 0; c < n; ++c) os << ' ' << stone_char(board_.at(r, c));
      os << '\n';
    }
    return os.str();
  }

 protected:
  std::vector<int> compute_legal_actions() const override {
    std::vector<int> out;
    const int n = board_.size();
    out.reserve(std::size_t(n) * n + 1);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (board_.at(r, c) == Stone::Empty) out.push_back(r * n + c);
      }
    }
    if (swap_available()) out.push_back(swap_action());
    return out;
  }

  bool check_legal(int action) const override {
    const int cells = board_.num_cells();
    if (action < cells) return board_.at(action / board_.size(), action % board_.size()) == Stone::Empty;
    return action == swap_action() && swap_available();
  }

  StatePtr do_apply(int action) const override {
    auto next = std::make_shared<HexState>(*this);
    next->ply_ += 1;
    if (action == swap_action()) {
      next->colors_.swapped = true;
      return next;
    }
    const int r = action / board_.size(), c = action % board_.size();
    next->board_.set(r, c, color_to_move());
    next->board_.link(next->uf_, r, c);
    next->stones_ += 1;
    next->winner_ = next->board_.winner_in(next->uf_);
    return next;
  }

 private:
  bool swap_available() const { return pie_rule_ && ply_ == 1 && !colors_.swapped; }

  HexBoard board_;
  UnionFind uf_;
  bool pie_rule_;
  PieColors colors_;
  int ply_ = 0;
  int stones_ = 0;
  std::optional<Stone> winner_;
};

}  // namespace zg::games
