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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace zg::train {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainLoopConfig {
  std::string game = "connect4x4k3";
  int batch_size = 256;
  double learning_rate = 0.01;
  double weight_decay = 1e-4;
  double grad_clip = 1.0;  // global L2 norm cap per step; 0 disables
  int checkpoint_interval = 100;
  int buffer_capacity = 100000;
  int simulations = 600;
  int workers = 1;
  std::uint64_t seed = 0;

  // Network shape for a fresh run.
  int trunk_channels = 16;
  int residual_blocks = 2;
  int kernel_size = 3;
  int value_pool_channels = 8;
  int value_hidden = 32;

  int max_steps = 0;  // 0: unlimited
  int max_games = 0;  // 0: unlimited
  std::string out_dir = "run";
  std::string init_checkpoint;  // resume from this network instead of a random one
  double pool_game_fraction = 0.5;
  int sample_plies = 8;
  double dirichlet_alpha = 0.3;
  double dirichlet_epsilon = 0.25;
  // Single-threaded alternation of one game and as many training steps as the
  // buffer allows; reproducible for a fixed seed.
  bool synchronous = false;

  void validate() const;
};

namespace detail {

using FieldRef = std::variant<int*, double*, std::string*, bool*, std::uint64_t*>;

inline std::vector<std::pair<const char*, FieldRef>> config_fields(TrainLoopConfig& c) {
  return {
      {"game", &c.game},
      {"batch_size", &c.batch_size},
      {"learning_rate", &c.learning_rate},
      {"weight_decay", &c.weight_decay},
      {"grad_clip", &c.grad_clip},
      {"checkpoint_interval", &c.checkpoint_interval},
      {"buffer_capacity", &c.buffer_capacity},
      {"simulations", &c.simulations},
      {"workers", &c.workers},
      {"seed", &c.seed},
      {"trunk_channels", &c.trunk_channels},
      {"residual_blocks", &c.residual_blocks},
      {"kernel_size", &c.kernel_size},
      {"value_pool_channels", &c.value_pool_channels},
      {"value_hidden", &c.value_hidden},
      {"max_steps", &c.max_steps},
      {"max_games", &c.max_games},
      {"out_dir", &c.out_dir},
      {"init_checkpoint", &c.init_checkpoint},
      {"pool_game_fraction", &c.pool_game_fraction},
      {"sample_plies", &c.sample_plies},
      {"dirichlet_alpha", &c.dirichlet_alpha},
      {"dirichlet_epsilon", &c.dirichlet_epsilon},
      {"synchronous", &c.synchronous},
  };
}

inline std::string trim(std::string s) {
  const auto ws = " \t\r";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError("bad value for " + key + ": '" + text + "'");
  return v;
}

}  // namespace detail

inline void TrainLoopConfig::validate() const {
  auto positive = [](const char* key, double v) {
    if (!(v > 0)) throw ConfigError(std::string(key) + " must be positive");
  };
  if (game.empty()) throw ConfigError("game must be set");
  positive("batch_size", batch_size);
  positive("learning_rate", learning_rate);
  if (weight_decay < 0) throw ConfigError("weight_decay must be non-negative");
  if (grad_clip < 0) throw ConfigError("grad_clip must be non-negative");
  positive("checkpoint_interval", checkpoint_interval);
  positive("buffer_capacity", buffer_capacity);
  positive("simulations", simulations);
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (batch_size > buffer_capacity) throw ConfigError("batch_size exceeds buffer_capacity");
  if (max_steps < 0 || max_games < 0) throw ConfigError("max_steps and max_games must be non-negative");
  if (pool_game_fraction < 0 || pool_game_fraction > 1) throw ConfigError("pool_game_fraction must lie in [0, 1]");
  if (dirichlet_epsilon < 0 || dirichlet_epsilon > 1) throw ConfigError("dirichlet_epsilon must lie in [0, 1]");
  positive("dirichlet_alpha", dirichlet_alpha);
  if (sample_plies < 0) throw ConfigError("sample_plies must be non-negative");
}

// Flat key=value lines; '#' starts a comment. Unknown keys are errors.
inline TrainLoopConfig parse_config(std::istream& is) {
  TrainLoopConfig c;
  auto fields = detail::config_fields(c);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return key == f.first; });
    if (it == fields.end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    std::visit(
        [&](auto* field) {
          using F = std::remove_pointer_t<decltype(field)>;
          if constexpr (std::is_same_v<F, std::string>) {
            *field = value;
          } else if constexpr (std::is_same_v<F, bool>) {
            if (value == "true" || value == "1") {
              *field = true;
            } else if (value == "false" || value == "0") {
              *field = false;
            } else {
              throw ConfigError("bad value for " + key + ": '" + value + "'");
            }
          } else {
            *field = detail::parse_number<F>(key, value);
          }
        },
        it->second);
  }
  c.validate();
  return c;
}

inline TrainLoopConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path.string());
  return parse_config(f);
}

inline std::string to_text(TrainLoopConfig c) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [key, ref] : detail::config_fields(c)) {
    os << key << " = ";
    std::visit(
        [&](auto* field) {
          if constexpr (std::is_same_v<std::remove_pointer_t<decltype(field)>, bool>) {
            os << (*field ? "true" : "false");
          } else {
            os << *field;
          }
        },
        ref);
    os << '\n';
  }
  return os.str();
}

}  // namespace zg::train
