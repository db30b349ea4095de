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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zg::games {

enum class Stone : std::uint8_t { Empty = 0, Black = 1, White = 2 };

constexpr Stone other(Stone s) {
  return s == Stone::Black ? Stone::White : (s == Stone::White ? Stone::Black : Stone::Empty);
}

inline char stone_char(Stone s) {
  return s == Stone::Black ? 'X' : (s == Stone::White ? 'O' : '.');
}

// Six hexagonal neighbours in (row, col) offsets. Shared by Hex (rhombus) and
// Havannah (hexagon embedded in a square array).
inline constexpr std::array<std::array<int, 2>, 6> kHexNeighbors = {{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 0}, {1, -1}, {0, -1},
}};

}  // namespace zg::games
