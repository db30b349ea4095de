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

#include <compare>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zerogames/tensor.hpp"

namespace zg {

enum class Player : std::uint8_t { First = 0, Second = 1 };

constexpr Player opponent(Player p) { return p == Player::First ? Player::Second : Player::First; }
constexpr int index_of(Player p) { return static_cast<int>(p); }

inline const char* to_string(Player p) { return p == Player::First ? "first" : "second"; }

// Rule violations: illegal action, acting on a finished game, asking a chance
// node for player actions, and so on.
class GameError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct GameStatus {
  enum class Kind : std::uint8_t { Ongoing, Win, Draw };

  Kind kind = Kind::Ongoing;
  Player winner = Player::First;  // meaningful only for Kind::Win

  static constexpr GameStatus ongoing() { return {}; }
  static constexpr GameStatus win(Player p) { return {Kind::Win, p}; }
  static constexpr GameStatus draw() { return {Kind::Draw, Player::First}; }

  constexpr bool terminal() const { return kind != Kind::Ongoing; }
  constexpr bool is_win() const { return kind == Kind::Win; }

  friend constexpr bool operator==(const GameStatus& a, const GameStatus& b) {
    return a.kind == b.kind && (a.kind != Kind::Win || a.winner == b.winner);
  }
};

inline std::string to_string(const GameStatus& s) {
  switch (s.kind) {
    case GameStatus::Kind::Ongoing: return "ongoing";
    case GameStatus::Kind::Draw: return "draw";
    case GameStatus::Kind::Win: return std::string("win:") + to_string(s.winner);
  }
  return "?";
}

struct Action {
  int channel = 0;
  int row = 0;
  int col = 0;
  auto operator<=>(const Action&) const = default;
};

// Layout of the policy tensor. Every action of a game owns one flat index.
struct ActionSpace {
  int channels = 1;
  int height = 1;
  int width = 1;

  constexpr int total() const { return channels * height * width; }
  constexpr bool contains(int index) const { return index >= 0 && index < total(); }
  constexpr bool contains(const Action& a) const {
    return a.channel >= 0 && a.channel < channels && a.row >= 0 && a.row < height && a.col >= 0 &&
           a.col < width;
  }
  int index(const Action& a) const {
    if (!contains(a)) {
      throw GameError("action (" + std::to_string(a.channel) + "," + std::to_string(a.row) + "," +
                      std::to_string(a.col) + ") outside the action space");
    }
    return (a.channel * height + a.row) * width + a.col;
  }
  Action triple(int index) const {
    if (!contains(index)) throw GameError("action index " + std::to_string(index) + " out of range");
    return {index / (height * width), (index / width) % height, index % width};
  }
  friend constexpr bool operator==(const ActionSpace&, const ActionSpace&) = default;
};

class GameState;
using StatePtr = std::shared_ptr<const GameState>;

struct ChanceOutcome {
  int value = 0;
  double probability = 0.0;
  StatePtr successor;
};

inline constexpr int kFeaturePlanes = 3;

// Immutable game position. Concrete games override the protected hooks; the
// public entry points enforce the shared preconditions.
class GameState {
 public:
  virtual ~GameState() = default;

  virtual std::string game_id() const = 0;
  virtual ActionSpace action_space() const = 0;
  virtual Player to_move() const = 0;
  virtual int ply() const = 0;
  virtual GameStatus status() const = 0;
  virtual bool is_chance() const { return false; }

  // Board geometry used by the encoder and by the match service.
  int height() const { return action_space().height; }
  int width() const { return action_space().width; }
  virtual bool on_board(int /*row*/, int /*col*/) const { return true; }
  virtual std::optional<Player> cell_owner(int row, int col) const = 0;
  // Extra per-cell tag, e.g. the piece number in Einstein Wurfelt Nicht.
  virtual int cell_label(int /*row*/, int /*col*/) const { return 0; }

  virtual std::string to_string() const = 0;

  // Orientation seen by the network. A game whose goal depends on the mover's
  // colour (Hex) transposes square boards so the mover always joins top to
  // bottom; the policy tensor is transposed with it.
  virtual bool transposed_view() const { return false; }

  // Action index <-> index in the network's policy tensor. An involution.
  int view_index(int action) const {
    if (!transposed_view()) return action;
    const auto space = action_space();
    auto t = space.triple(action);
    std::swap(t.row, t.col);
    return space.index(t);
  }

  bool terminal() const { return status().terminal(); }

  std::vector<int> legal_actions() const {
    if (is_chance()) throw GameError("legal_actions called on a chance node");
    if (terminal()) return {};
    return compute_legal_actions();
  }

  bool is_legal(int action) const {
    if (is_chance() || terminal() || !action_space().contains(action)) return false;
    return check_legal(action);
  }

  StatePtr apply(int action) const {
    if (is_chance()) throw GameError("apply called on a chance node; use chance_outcomes");
    if (terminal()) throw GameError("apply called on a terminal state");
    if (!is_legal(action)) {
      auto t = action_space().contains(action) ? action_space().triple(action) : Action{-1, -1, -1};
      throw GameError("illegal action " + std::to_string(action) + " (" + std::to_string(t.channel) +
                      "," + std::to_string(t.row) + "," + std::to_string(t.col) + ") in " +
                      game_id() + " at ply " + std::to_string(ply()));
    }
    return do_apply(action);
  }

  std::vector<ChanceOutcome> chance_outcomes() const {
    if (!is_chance()) throw GameError("chance_outcomes called on a decision node");
    return compute_chance_outcomes();
  }

  StatePtr apply_chance(int value) const {
    for (auto& o : chance_outcomes()) {
      if (o.value == value) return o.successor;
    }
    throw GameError("no chance outcome with value " + std::to_string(value));
  }

  // Planes: mover's stones, opponent's stones, ones on every board cell, in
  // the orientation given by transposed_view().
  FeatureTensor encode() const {
    if (is_chance()) throw GameError("encode called on a chance node");
    const int h = height(), w = width();
    const bool tr = transposed_view();
    FeatureTensor t({kFeaturePlanes, std::size_t(tr ? w : h), std::size_t(tr ? h : w)});
    const Player me = to_move();
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (!on_board(r, c)) continue;
        const int y = tr ? c : r, x = tr ? r : c;
        t.at(2, y, x) = 1.0f;
        if (auto o = cell_owner(r, c)) t.at(*o == me ? 0 : 1, y, x) = 1.0f;
      }
    }
    return t;
  }

 protected:
  virtual std::vector<int> compute_legal_actions() const = 0;
  virtual bool check_legal(int action) const {
    for (int a : compute_legal_actions()) {
      if (a == action) return true;
    }
    return false;
  }
  virtual StatePtr do_apply(int action) const = 0;
  virtual std::vector<ChanceOutcome> compute_chance_outcomes() const {
    throw GameError(game_id() + " has no chance nodes");
  }
};

inline FeatureTensor encode(const GameState& s) { return s.encode(); }
inline std::vector<int> legal_actions(const GameState& s) { return s.legal_actions(); }
inline StatePtr apply(const GameState& s, int action) { return s.apply(action); }

// +1 win, -1 loss, 0 draw, seen from `perspective`.
inline int outcome(const GameState& s, Player perspective) {
  const auto st = s.status();
  if (!st.terminal()) throw GameError("outcome requested for a non-terminal state");
  if (st.kind == GameStatus::Kind::Draw) return 0;
  return st.winner == perspective ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Move history text format: one entry per line, either `channel,row,col` for a
// player action or `roll,value` for a resolved chance node. Blank lines and
// lines starting with '#' are ignored.

struct HistoryEntry {
  bool chance = false;
  int roll = 0;
  Action action;

  static HistoryEntry of(Action a) { return {false, 0, a}; }
  static HistoryEntry of_roll(int v) { return {true, v, {}}; }
  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

inline void write_history(std::ostream& os, const std::vector<HistoryEntry>& moves) {
  for (const auto& m : moves) {
    if (m.chance) {
      os << "roll," << m.roll << '\n';
    } else {
      os << m.action.channel << ',' << m.action.row << ',' << m.action.col << '\n';
    }
  }
}

inline std::vector<HistoryEntry> read_history(std::istream& is) {
  std::vector<HistoryEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) {
      throw std::runtime_error("history line " + std::to_string(lineno) + ": expected channel,row,col");
    }
    try {
      if (a == "roll") {
        out.push_back(HistoryEntry::of_roll(std::stoi(b)));
        continue;
      }
      if (!std::getline(ls, c)) {
        throw std::runtime_error("history line " + std::to_string(lineno) + ": expected channel,row,col");
      }
      out.push_back(HistoryEntry::of(Action{std::stoi(a), std::stoi(b), std::stoi(c)}));
    } catch (const std::logic_error&) {
      throw std::runtime_error("history line " + std::to_string(lineno) + ": not a number: " + line);
    }
  }
  return out;
}

inline StatePtr replay(StatePtr state, const std::vector<HistoryEntry>& moves) {
  for (const auto& m : moves) {
    if (m.chance) {
      state = state->apply_chance(m.roll);
    } else {
      state = state->apply(state->action_space().index(m.action));
    }
  }
  return state;
}

}  // namespace zg
