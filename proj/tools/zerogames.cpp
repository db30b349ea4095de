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

// zerogames: train, evaluate, grow and play zero-learning game engines.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "zerogames/nn/growth.hpp"
#include "zerogames/play/arena.hpp"
#include "zerogames/play/server.hpp"
#include "zerogames/train/loop.hpp"
#include "zerogames/train/wire.hpp"

namespace {

using namespace zg;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

train::TrainLoop* g_loop = nullptr;
play::HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_loop) g_loop->request_stop();
  if (g_server) g_server->stop();
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides, const std::string& samples_from) {
  std::ifstream f(config_path);
  if (!f) throw train::ConfigError("cannot open config " + config_path);
  std::stringstream text;
  text << f.rdbuf();
  for (const auto& kv : overrides) text << '\n' << kv;
  auto cfg = train::parse_config(text);
  std::cout << "training " << cfg.game << " into " << cfg.out_dir << '\n';
  train::TrainLoop loop(cfg, &std::cout);
  g_loop = &loop;
  std::signal(SIGINT, on_signal);
  std::thread reader;
  if (!samples_from.empty()) {
    reader = std::thread([&] {
      std::ifstream in(samples_from, std::ios::binary);
      try {
        while (auto rec = train::read_record(in)) loop.ingest(*rec);
      } catch (const std::exception& e) {
        std::cerr << "sample stream: " << e.what() << '\n';
      }
    });
  }
  auto stats = loop.run();
  g_loop = nullptr;
  if (reader.joinable()) reader.join();
  std::cout << "done: " << stats.steps << " steps, " << stats.games << " games (" << stats.pool_games
            << " against the pool), final checkpoint " << loop.final_path().string() << '\n';
  return kExitOk;
}

int cmd_selfplay(const std::string& ckpt_path, int games, int sims, std::uint64_t seed, const std::string& out_path) {
  const auto ck = nn::load_checkpoint(ckpt_path);
  auto net = std::make_shared<const nn::Network<float>>(ck.network);
  mcts::NetworkEvaluator model(net);
  train::SelfPlayConfig sp;
  sp.search.simulations = sims;
  std::ofstream out;
  if (!out_path.empty()) {
    out.open(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_path);
  }
  mcts::Rng rng(seed);
  int wins[2] = {0, 0}, draws = 0;
  for (int g = 0; g < games; ++g) {
    auto rec = train::self_play_game(games::make_game(ck.game_id), model, sp, rng);
    if (rec.status.kind == GameStatus::Kind::Draw) {
      ++draws;
    } else if (rec.status.is_win()) {
      ++wins[index_of(rec.status.winner)];
    }
    if (out.is_open() && !rec.samples.empty()) {
      train::write_record(out, {ck.game_id, ck.network.spec.hash(), std::move(rec.samples)});
    }
  }
  std::cout << games << " games: first " << wins[0] << ", second " << wins[1] << ", draws " << draws << '\n';
  return kExitOk;
}

std::unique_ptr<play::Agent> make_agent(const std::string& what, int sims, std::string* game_id) {
  if (what == "random") return std::make_unique<play::RandomAgent>();
  mcts::SearchConfig c;
  c.simulations = sims;
  if (what == "uct") return std::make_unique<play::EngineAgent>(nullptr, c, "uct");
  auto ck = nn::load_checkpoint(what);
  if (game_id->empty()) {
    *game_id = ck.game_id;
  } else if (!games::compatible(ck.game_id, *game_id)) {
    throw play::ArenaError(what + " was trained on " + ck.game_id + ", not " + *game_id);
  }
  return std::make_unique<play::EngineAgent>(play::EngineAgent::from_checkpoint(ck, sims));
}

int cmd_eval(const std::string& a, const std::string& b, int n, int sims, std::string game, std::uint64_t seed,
             int opening) {
  auto agent_a = make_agent(a, sims, &game);
  auto agent_b = make_agent(b, sims, &game);
  if (game.empty()) throw UsageError("--game is required when neither side is a checkpoint");
  auto result = play::arena(games::make_game(game), *agent_a, *agent_b, n, {seed, opening});
  std::cout << game << ": " << a << " vs " << b << " over " << result.played() << " games\n"
            << "  wins " << result.wins << "  draws " << result.draws << "  losses " << result.losses << '\n';
  if (auto elo = result.elo()) {
    std::cout << "  score " << result.score() << "  elo " << *elo << '\n';
  } else {
    std::cout << "  no games, no estimate\n";
  }
  return kExitOk;
}

int cmd_convert(const std::string& in, const std::string& out, bool add_block, int add_channels,
                const std::string& group, int grow_kernel, std::uint64_t seed) {
  if (!add_block && add_channels == 0 && grow_kernel == 0) {
    throw UsageError("convert needs --add-block, --add-channels or --grow-kernel");
  }
  auto ck = nn::load_checkpoint(in);
  std::mt19937_64 rng(seed);
  const auto before = ck.network.spec.describe();
  if (add_block) ck.network = nn::grow_add_block(ck.network, rng);
  if (add_channels > 0) ck.network = nn::grow_add_channels(ck.network, nn::parse_layer_group(group), add_channels, rng);
  if (grow_kernel > 0) ck.network = nn::grow_kernel(ck.network, grow_kernel);
  nn::save_checkpoint(ck, out);
  std::cout << before << "  ->  " << ck.network.spec.describe() << '\n';
  return kExitOk;
}

// Terminal play. Moves are "row col", "channel row col" or "swap".
int cmd_play(const std::string& ckpt, std::string game, int sims, const std::string& human_side, std::uint64_t seed) {
  play::MatchService::Options opt;
  opt.default_checkpoint = ckpt;
  opt.seed = seed;
  play::MatchService svc(opt);
  if (game.empty()) game = nn::load_checkpoint(ckpt).game_id;
  auto v = svc.create({game, 0, "", sims, play::parse_player(human_side), seed});
  std::string line;
  for (;;) {
    std::cout << v.board << '\n';
    if (v.status.terminal()) {
      std::cout << "result: " << to_string(v.status) << '\n';
      return kExitOk;
    }
    std::cout << "your move> " << std::flush;
    if (!std::getline(std::cin, line) || line == "quit") return kExitOk;
    std::istringstream ls(line);
    std::vector<int> nums;
    for (int x; ls >> x;) nums.push_back(x);
    Action a;
    if (line == "swap") {
      a = {1, 0, 0};
    } else if (nums.size() == 2) {
      a = {0, nums[0], nums[1]};
    } else if (nums.size() == 3) {
      a = {nums[0], nums[1], nums[2]};
    } else {
      std::cout << "enter \"row col\", \"channel row col\" or \"swap\"\n";
      continue;
    }
    try {
      v = svc.submit(v.id, a);
    } catch (const play::MatchError& e) {
      std::cout << e.what() << '\n';
    }
  }
}

int cmd_serve(const std::string& ckpt, const std::string& host, int port, const std::string& history_dir) {
  play::MatchService::Options opt;
  opt.default_checkpoint = ckpt;
  opt.async = true;
  opt.history_dir = history_dir;
  nn::load_checkpoint(ckpt);  // fail early on a bad file
  play::MatchService svc(opt);
  play::HttpServer server(svc);
  if (!server.bind(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving on http://" << host << ':' << port << std::endl;
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-learning board game engines"};
  app.require_subcommand(1);

  std::string config, samples_from;
  std::vector<std::string> overrides;
  auto* train = app.add_subcommand("train", "Run self-play training from a key=value config file");
  train->add_option("config", config, "Config file")->required();
  train->add_option("--set", overrides, "Override a config key (key=value)");
  train->add_option("--samples-from", samples_from, "Also read sample records from this stream");

  std::string ckpt, out;
  int games = 10, sims = 64;
  std::uint64_t seed = 0;
  auto* selfplay = app.add_subcommand("selfplay", "Generate self-play games with a checkpoint");
  selfplay->add_option("checkpoint", ckpt, "Checkpoint")->required();
  selfplay->add_option("-n,--games", games, "Number of games")->check(CLI::NonNegativeNumber);
  selfplay->add_option("--sims", sims, "Simulations per move")->check(CLI::PositiveNumber);
  selfplay->add_option("--seed", seed, "Random seed");
  selfplay->add_option("-o,--out", out, "Write sample records to this file");

  std::string a, b, game;
  int n = 100;
  auto* eval = app.add_subcommand("eval", "Arena between two players (checkpoint, 'random' or 'uct')");
  eval->add_option("a", a, "First player")->required();
  eval->add_option("b", b, "Second player")->required();
  eval->add_option("-n,--games", n, "Number of games")->check(CLI::NonNegativeNumber);
  eval->add_option("--sims", sims, "Simulations per move")->check(CLI::PositiveNumber);
  eval->add_option("--game", game, "Game id (defaults to the checkpoint's)");
  eval->add_option("--seed", seed, "Random seed");
  int opening = 0;
  eval->add_option("--opening", opening, "Random opening plies shared by each colour-swapped pair")
      ->check(CLI::NonNegativeNumber);

  bool add_block = false;
  int add_channels = 0, grow_kernel = 0;
  std::string group = "trunk";
  auto* convert = app.add_subcommand("convert", "Grow a checkpoint without changing its outputs");
  convert->add_option("checkpoint", ckpt, "Input checkpoint")->required();
  convert->add_option("-o,--out", out, "Output checkpoint")->required();
  convert->add_flag("--add-block", add_block, "Append a residual block");
  convert->add_option("--add-channels", add_channels, "Add channels to --group")->check(CLI::PositiveNumber);
  convert->add_option("--group", group, "trunk, value_pool or value_hidden");
  convert->add_option("--grow-kernel", grow_kernel, "New odd kernel size")->check(CLI::PositiveNumber);
  convert->add_option("--seed", seed, "Seed for the new weights");

  std::string human = "first";
  auto* playcmd = app.add_subcommand("play", "Play against a checkpoint in the terminal");
  playcmd->add_option("checkpoint", ckpt, "Checkpoint")->required();
  playcmd->add_option("--game", game, "Game id (defaults to the checkpoint's)");
  playcmd->add_option("--sims", sims, "Simulations per move")->check(CLI::PositiveNumber);
  playcmd->add_option("--human", human, "first or second")->check(CLI::IsMember({"first", "second"}));
  playcmd->add_option("--seed", seed, "Random seed");

  std::string host = "127.0.0.1", history_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the match API over HTTP");
  serve->add_option("checkpoint", ckpt, "Default checkpoint")->required();
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--history-dir", history_dir, "Write match histories here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return cmd_train(config, overrides, samples_from);
    if (*selfplay) return cmd_selfplay(ckpt, games, sims, seed, out);
    if (*eval) return cmd_eval(a, b, n, sims, game, seed, opening);
    if (*convert) return cmd_convert(ckpt, out, add_block, add_channels, group, grow_kernel, seed);
    if (*playcmd) return cmd_play(ckpt, game, sims, human, seed);
    if (*serve) return cmd_serve(ckpt, host, port, history_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
