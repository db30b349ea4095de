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
#include <bit>
#include <cstdlib>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zerogames/game.hpp"
#include "zerogames/games/hex.hpp"
#include "zerogames/games/stone.hpp"

namespace zg::games {

enum class HavannahWin : std::uint8_t { Bridge, Fork, Ring };

inline const char* to_string(HavannahWin w) {
  switch (w) {
    case HavannahWin::Bridge: return "bridge";
    case HavannahWin::Fork: return "fork";
    case HavannahWin::Ring: return "ring";
  }
  return "?";
}

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Hexagonal board of base S embedded in a (2S-1)x(2S-1) array with the Hex
// adjacency. A cell (r,c) is on the board iff S-1 <= r+c <= 3S-3.
class HavannahBoard {
 public:
  explicit HavannahBoard(int base) : base_(base), n_(2 * base - 1), cells_(std::size_t(n_) * n_) {
    if (base < 2) throw GameError("havannah base size must be at least 2");
  }

  int base() const { return base_; }
  int span() const { return n_; }
  bool contains(int r, int c) const {
    return r >= 0 && r < n_ && c >= 0 && c < n_ && r + c >= base_ - 1 && r + c <= 3 * (base_ - 1);
  }
  Stone at(int r, int c) const { return cells_[std::size_t(r) * n_ + c]; }
  void set(int r, int c, Stone s) { cells_[std::size_t(r) * n_ + c] = s; }
  int num_cells() const { return 3 * base_ * base_ - 3 * base_ + 1; }

  std::array<Cell, 6> corners() const {
    const int m = base_ - 1, e = n_ - 1;
    return {{{0, m}, {0, e}, {m, e}, {e, m}, {e, 0}, {m, 0}}};
  }

  int corner_id(int r, int c) const {
    const auto cs = corners();
    for (int i = 0; i < 6; ++i) {
      if (cs[i] == Cell{r, c}) return i;
    }
    return -1;
  }

  // Side index 0..5 for edge cells that are not corners, -1 otherwise.
  int side_id(int r, int c) const {
    if (!contains(r, c) || corner_id(r, c) >= 0) return -1;
    const int m = base_ - 1, e = n_ - 1;
    if (r == 0) return 0;
    if (c == e) return 1;
    if (r + c == 3 * m) return 2;
    if (r == e) return 3;
    if (c == 0) return 4;
    if (r + c == m) return 5;
    return -1;
  }

  bool on_perimeter(int r, int c) const {
    for (auto [dr, dc] : kHexNeighbors) {
      if (!contains(r + dr, c + dc)) return true;
    }
    return false;
  }

  bool full() const {
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c < n_; ++c) {
        if (contains(r, c) && at(r, c) == Stone::Empty) return false;
      }
    }
    return true;
  }

  friend bool operator==(const HavannahBoard&, const HavannahBoard&) = default;

 private:
  int base_;
  int n_;
  std::vector<Stone> cells_;
};

namespace detail {

// A cell is enclosed by `color` iff it cannot reach the outside of the board
// without crossing a `color` stone. Non-`color` cells are tested by one flood
// fill from the perimeter; a `color` stone is enclosed iff none of its six
// neighbours is off-board or non-`color` (its neighbours then form a loop).
inline bool has_ring(const HavannahBoard& b, Stone color) {
  const int n = b.span();
  std::vector<char> seen(std::size_t(n) * n, 0);
  std::vector<Cell> stack;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (b.contains(r, c) && b.at(r, c) != color && b.on_perimeter(r, c)) {
        seen[std::size_t(r) * n + c] = 1;
        stack.push_back({r, c});
      }
    }
  }
  while (!stack.empty()) {
    const Cell cur = stack.back();
    stack.pop_back();
    for (auto [dr, dc] : kHexNeighbors) {
      const int nr = cur.row + dr, nc = cur.col + dc;
      if (!b.contains(nr, nc) || b.at(nr, nc) == color) continue;
      auto& s = seen[std::size_t(nr) * n + nc];
      if (!s) {
        s = 1;
        stack.push_back({nr, nc});
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (!b.contains(r, c)) continue;
      if (b.at(r, c) != color) {
        if (!seen[std::size_t(r) * n + c]) return true;
        continue;
      }
      bool boxed = true;
      for (auto [dr, dc] : kHexNeighbors) {
        const int nr = r + dr, nc = c + dc;
        if (!b.contains(nr, nc) || b.at(nr, nc) != color) {
          boxed = false;
          break;
        }
      }
      if (boxed) return true;
    }
  }
  return false;
}

}  // namespace detail

// Win created by the stone at `last`, if any. Bridge is reported before Fork,
// Fork before Ring, when one move completes several structures.
inline std::optional<HavannahWin> havannah_win(const HavannahBoard& b, Cell last) {
  const Stone color = b.at(last.row, last.col);
  if (color == Stone::Empty) return std::nullopt;
  const int n = b.span();
  std::vector<char> seen(std::size_t(n) * n, 0);
  std::vector<Cell> stack{last};
  seen[std::size_t(last.row) * n + last.col] = 1;
  unsigned corners = 0, sides = 0;
  while (!stack.empty()) {
    const Cell cur = stack.back();
    stack.pop_back();
    if (int k = b.corner_id(cur.row, cur.col); k >= 0) corners |= 1u << k;
    if (int k = b.side_id(cur.row, cur.col); k >= 0) sides |= 1u << k;
    for (auto [dr, dc] : kHexNeighbors) {
      const int nr = cur.row + dr, nc = cur.col + dc;
      if (!b.contains(nr, nc) || b.at(nr, nc) != color) continue;
      auto& s = seen[std::size_t(nr) * n + nc];
      if (!s) {
        s = 1;
        stack.push_back({nr, nc});
      }
    }
  }
  if (std::popcount(corners) >= 2) return HavannahWin::Bridge;
  if (std::popcount(sides) >= 3) return HavannahWin::Fork;

  int friends = 0;
  for (auto [dr, dc] : kHexNeighbors) {
    const int nr = last.row + dr, nc = last.col + dc;
    if (b.contains(nr, nc) && b.at(nr, nc) == color) ++friends;
  }
  // Closing a loop needs at least two neighbouring stones of the same color.
  if (friends >= 2 && detail::has_ring(b, color)) return HavannahWin::Ring;
  return std::nullopt;
}

inline std::vector<std::pair<int, int>> havannah_corner_pairs() {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) out.emplace_back(a, b);
  }
  return out;
}

inline std::vector<std::array<int, 3>> havannah_side_triples() {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      for (int c = b + 1; c < 6; ++c) out.push_back({a, b, c});
    }
  }
  return out;
}

class HavannahState final : public GameState {
 public:
  explicit HavannahState(int base, bool pie_rule = true) : board_(base), pie_rule_(pie_rule) {}

  std::string game_id() const override { return "havannah" + std::to_string(board_.base()); }
  ActionSpace action_space() const override { return {2, board_.span(), board_.span()}; }
  int ply() const override { return ply_; }
  Player to_move() const override { return colors_.owner_of(color_to_move()); }
  GameStatus status() const override {
    if (win_) return GameStatus::win(colors_.owner_of(winner_color_));
    if (stones_ == board_.num_cells()) return GameStatus::draw();
    return GameStatus::ongoing();
  }
  bool on_board(int r, int c) const override { return board_.contains(r, c); }
  std::optional<Player> cell_owner(int r, int c) const override {
    if (!board_.contains(r, c)) return std::nullopt;
    const Stone s = board_.at(r, c);
    if (s == Stone::Empty) return std::nullopt;
    return colors_.owner_of(s);
  }

  const HavannahBoard& board() const { return board_; }
  std::optional<HavannahWin> win_kind() const { return win_; }
  bool swapped() const { return colors_.swapped; }
  Stone color_of(Player p) const { return colors_.color_of(p); }
  Stone color_to_move() const { return stones_ % 2 == 0 ? Stone::Black : Stone::White; }
  int swap_action() const { return action_space().index({1, 0, 0}); }

  std::string to_string() const override {
    std::ostringstream os;
    const int n = board_.span();
    for (int r = 0; r < n; ++r) {
      const int first = std::max(0, board_.base() - 1 - r);
      os << std::string(std::size_t(std::abs(board_.base() - 1 - r)), ' ');
      for (int c = first; c < n; ++c) {
        if (board_.contains(r, c)) os << stone_char(board_.at(r, c)) << ' ';
      }
      os << '\n';
    }
    return os.str();
  }

 protected:
  std::vector<int> compute_legal_actions() const override {
    std::vector<int> out;
    const int n = board_.span();
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (board_.contains(r, c) && board_.at(r, c) == Stone::Empty) out.push_back(r * n + c);
      }
    }
    if (swap_available()) out.push_back(swap_action());
    return out;
  }

  bool check_legal(int action) const override {
    const int n = board_.span();
    if (action < n * n) {
      const int r = action / n, c = action % n;
      return board_.contains(r, c) && board_.at(r, c) == Stone::Empty;
    }
    return action == swap_action() && swap_available();
  }

  StatePtr do_apply(int action) const override {
    auto next = std::make_shared<HavannahState>(*this);
    next->ply_ += 1;
    if (action == swap_action()) {
      next->colors_.swapped = true;
      return next;
    }
    const int n = board_.span();
    const Cell cell{action / n, action % n};
    const Stone color = color_to_move();
    next->board_.set(cell.row, cell.col, color);
    next->stones_ += 1;
    next->win_ = havannah_win(next->board_, cell);
    next->winner_color_ = color;
    return next;
  }

 private:
  bool swap_available() const { return pie_rule_ && ply_ == 1 && !colors_.swapped; }

  HavannahBoard board_;
  bool pie_rule_;
  PieColors colors_;
  int ply_ = 0;
  int stones_ = 0;
  std::optional<HavannahWin> win_;
  Stone winner_color_ = Stone::Empty;
};

}  // namespace zg::games
