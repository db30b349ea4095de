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

#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zerogames/game.hpp"
#include "zerogames/games/connect.hpp"
#include "zerogames/games/ewn.hpp"
#include "zerogames/games/havannah.hpp"
#include "zerogames/games/hex.hpp"

namespace zg::games {

class UnknownGameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidBoardSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parsed form of `hex{N}`, `havannah{S}`, `connect{W}x{H}k{K}` and `ewn`.
struct GameId {
  std::string family;
  std::vector<int> params;

  std::string str() const {
    if (family == "hex" || family == "havannah") return family + std::to_string(params.at(0));
    if (family == "connect") {
      return "connect" + std::to_string(params.at(0)) + "x" + std::to_string(params.at(1)) + "k" +
             std::to_string(params.at(2));
    }
    return family;
  }
};

struct GameInfo {
  std::string family;
  std::string pattern;
  std::string description;
  bool pie_rule;
};

inline std::vector<GameInfo> list_games() {
  return {
      {"hex", "hex{N}", "Hex on an N x N rhombus, pie rule", true},
      {"havannah", "havannah{S}", "Havannah on a hexagon of base S, pie rule", true},
      {"connect", "connect{W}x{H}k{K}", "K in a row with gravity on W columns by H rows", false},
      {"ewn", "ewn", "Einstein Wurfelt Nicht (5x5, die rolls)", false},
  };
}

namespace detail {

inline bool take_int(std::string_view& s, int& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr == s.data()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

inline bool take_prefix(std::string_view& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.remove_prefix(prefix.size());
  return true;
}

}  // namespace detail

inline std::optional<GameId> parse_game_id(std::string_view id) {
  std::string_view s = id;
  int a = 0, b = 0, c = 0;
  if (s == "ewn") return GameId{"ewn", {}};
  if (detail::take_prefix(s, "havannah")) {
    if (detail::take_int(s, a) && s.empty()) return GameId{"havannah", {a}};
    return std::nullopt;
  }
  if (detail::take_prefix(s, "hex")) {
    if (detail::take_int(s, a) && s.empty()) return GameId{"hex", {a}};
    return std::nullopt;
  }
  if (detail::take_prefix(s, "connect")) {
    if (detail::take_int(s, a) && detail::take_prefix(s, "x") && detail::take_int(s, b) &&
        detail::take_prefix(s, "k") && detail::take_int(s, c) && s.empty()) {
      return GameId{"connect", {a, b, c}};
    }
  }
  return std::nullopt;
}

inline std::string game_family(std::string_view id) {
  auto g = parse_game_id(id);
  if (!g) throw UnknownGameError("unknown game id '" + std::string(id) + "'");
  return g->family;
}

// Initial state for a game id. Throws UnknownGameError for unrecognised ids
// and InvalidBoardSizeError for out-of-range dimensions.
inline StatePtr make_game(std::string_view id) {
  auto g = parse_game_id(id);
  if (!g) throw UnknownGameError("unknown game id '" + std::string(id) + "'");
  auto check = [&](int v, int lo, int hi, const char* what) {
    if (v < lo || v > hi) {
      throw InvalidBoardSizeError(std::string(what) + " " + std::to_string(v) + " out of range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "] for " + g->family);
    }
  };
  if (g->family == "hex") {
    check(g->params[0], 1, 26, "size");
    return std::make_shared<HexState>(g->params[0]);
  }
  if (g->family == "havannah") {
    check(g->params[0], 2, 12, "base");
    return std::make_shared<HavannahState>(g->params[0]);
  }
  if (g->family == "connect") {
    check(g->params[0], 1, 16, "width");
    check(g->params[1], 1, 16, "height");
    check(g->params[2], 1, 16, "k");
    return std::make_shared<ConnectState>(g->params[0], g->params[1], g->params[2]);
  }
  return std::make_shared<EwnState>();
}

// Builds an id for `family` at a given board size (ignored for fixed-size games).
inline std::string game_id_for(std::string_view family, int size) {
  if (family == "hex" || family == "havannah") return std::string(family) + std::to_string(size);
  if (family == "ewn") return "ewn";
  throw UnknownGameError("game family '" + std::string(family) + "' needs a full game id");
}

// A network trained on one id can play another when the rules family and the
// action layout agree; board size is free because the network is fully
// convolutional. Connect games must also share K.
inline bool compatible(std::string_view trained_on, std::string_view target) {
  auto a = parse_game_id(trained_on), b = parse_game_id(target);
  if (!a || !b || a->family != b->family) return false;
  if (a->family == "connect") return a->params[2] == b->params[2];
  return true;
}

}  // namespace zg::games
