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

// Acceptance gate: one PASS/FAIL line per criterion. Thresholds are pinned
// below; the training criteria run real (small) training jobs and take a few
// minutes each. Arguments select criteria by name; none runs them all.

#include <unistd.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "connect_oracle.hpp"
#include "gradient_check.hpp"
#include "zerogames/games/registry.hpp"
#include "zerogames/mcts/search.hpp"
#include "zerogames/nn/checkpoint.hpp"
#include "zerogames/nn/growth.hpp"
#include "zerogames/nn/sgd.hpp"
#include "zerogames/play/arena.hpp"
#include "zerogames/tournament/elo_pool.hpp"
#include "zerogames/train/loop.hpp"

namespace fs = std::filesystem;
using namespace zg;

namespace {

// ---------------------------------------------------------------- thresholds

// Sizes 2..7 plus the single-cell board: 7 x 1000 fills.
constexpr int kHexMinSize = 1;
constexpr int kHexMaxSize = 7;
constexpr int kHexFillsPerSize = 1000;
constexpr double kHexSeconds = 10;
constexpr double kRulesSeconds = 60;
constexpr int kUctSims = 10000;
constexpr int kUctPositions = 100;
constexpr int kUctOptimalNeeded = 95;
constexpr double kUctSeconds = 300;
constexpr int kGradConfigs = 20;
constexpr double kGradTolerance = 1e-4;
constexpr double kGradSeconds = 60;
constexpr int kGrowthInputs = 100;
constexpr int kGrowthSteps = 100;
constexpr int kArenaGames = 100;
constexpr int kArenaSims = 64;
constexpr int kScaleWinsNeeded = 80;
constexpr int kE2eVsRandomNeeded = 95;
constexpr int kE2eVsStepZeroNeeded = 70;
constexpr double kE2eSeconds = 2 * 3600;
constexpr int kPoolCapacity = 10;
constexpr int kAdmissions = 1000;
constexpr int kSelectionDraws = 10000;
constexpr double kChiSquareP = 0.01;
constexpr int kEloUpdates = 10000;
constexpr double kEloTolerance = 1e-9;
constexpr int kCheckpointNetworks = 50;
constexpr int kDeterminismSteps = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome(const fs::path&)> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- hex

// Breadth-first search over the rhombus, written against the board geometry
// only: Black joins row 0 to row N-1, White joins column 0 to column N-1.
bool bfs_connects(const games::HexBoard& b, games::Stone s) {
  const int n = b.size();
  const bool black = s == games::Stone::Black;
  static constexpr int dr[6] = {-1, -1, 0, 0, 1, 1};
  static constexpr int dc[6] = {0, 1, -1, 1, -1, 0};
  std::vector<char> seen(std::size_t(n * n), 0);
  std::deque<std::pair<int, int>> q;
  for (int i = 0; i < n; ++i) {
    const int r = black ? 0 : i, c = black ? i : 0;
    if (b.at(r, c) == s) {
      seen[r * n + c] = 1;
      q.emplace_back(r, c);
    }
  }
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop_front();
    if ((black ? r : c) == n - 1) return true;
    for (int k = 0; k < 6; ++k) {
      const int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nr >= n || nc < 0 || nc >= n || seen[nr * n + nc] || b.at(nr, nc) != s) continue;
      seen[nr * n + nc] = 1;
      q.emplace_back(nr, nc);
    }
  }
  return false;
}

Outcome hex_no_draw(const fs::path&) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  int good = 0, total = 0;
  for (int n = kHexMinSize; n <= kHexMaxSize; ++n) {
    for (int t = 0; t < kHexFillsPerSize; ++t) {
      games::HexBoard b(n);
      std::vector<int> cells(n * n);
      for (int i = 0; i < n * n; ++i) cells[i] = i;
      std::shuffle(cells.begin(), cells.end(), rng);
      for (int i = 0; i < n * n; ++i) b.set(cells[i] / n, cells[i] % n, i % 2 ? games::Stone::White : games::Stone::Black);
      const bool black = bfs_connects(b, games::Stone::Black), white = bfs_connects(b, games::Stone::White);
      const auto w = games::hex_winner(b);
      ++total;
      if (black != white && w && (*w == games::Stone::Black) == black) ++good;
    }
  }
  const double secs = seconds_since(t0);
  const int expected = (kHexMaxSize - kHexMinSize + 1) * kHexFillsPerSize;
  return {good == expected && total == expected && secs < kHexSeconds,
          fmt("%d/%d fills with exactly one winner agreeing with BFS (%.1fs)", good, expected, secs)};
}

// ---------------------------------------------------------------- connect oracle

Outcome rules_oracle(const fs::path&) {
  const auto t0 = std::chrono::steady_clock::now();
  testing::ConnectMinimax mm;
  int states = 0, status_bad = 0, winner_bad = 0, moves_bad = 0, terminal_bad = 0, terminal_checked = 0;
  std::unordered_set<std::string> seen;
  std::function<void(const testing::OracleConnect&, const StatePtr&)> walk = [&](const testing::OracleConnect& o,
                                                                               const StatePtr& s) {
    if (!seen.insert(o.key()).second) return;
    ++states;
    const int cls = o.classify();
    const auto want = cls == -1  ? GameStatus::ongoing()
                      : cls == 0 ? GameStatus::draw()
                                 : GameStatus::win(cls == 1 ? Player::First : Player::Second);
    const auto& cs = static_cast<const games::ConnectState&>(*s);
    if (s->status() != want) ++status_bad;
    if (games::connect_winner(cs.board()) != want) ++winner_bad;
    const auto cols = o.moves();
    if (cols.size() != s->legal_actions().size()) ++moves_bad;
    if (cls == -1) {
      // Every child visited once: terminal children carry the exact result.
      mcts::SearchConfig cfg;
      cfg.mode = mcts::Mode::UCT;
      cfg.simulations = int(cols.size());
      mcts::Search search(s, cfg);
      search.run();
      for (const auto& c : search.root().children) {
        if (!c.state->terminal()) continue;
        ++terminal_checked;
        const int col = s->action_space().triple(c.move).col;
        if (c.num_sims != 1 || c.total_reward != -mm.value(o.play(col))) ++terminal_bad;
      }
    }
    for (int c : cols) walk(o.play(c), s->apply(cs.action_for_column(c)));
  };
  walk(testing::OracleConnect(3, 3, 3), games::make_game("connect3x3k3"));
  const int reachable = int(testing::reachable_positions(3, 3, 3).size());
  const double secs = seconds_since(t0);
  const int bad = status_bad + winner_bad + moves_bad + terminal_bad;
  return {bad == 0 && states == reachable && secs < kRulesSeconds,
          fmt("%d/%d states, %d mismatches, %d MCTS terminal values checked (%.1fs)", states, reachable, bad,
              terminal_checked, secs)};
}

Outcome uct_strength(const fs::path&) {
  const auto t0 = std::chrono::steady_clock::now();
  testing::ConnectMinimax mm;
  auto pairs = testing::reachable_pairs(3, 3, 3, games::make_game("connect3x3k3"),
                                        [](const StatePtr& s, int row, int col) { return s->apply(row * 3 + col); });
  std::vector<std::pair<testing::OracleConnect, StatePtr>> open;
  for (auto& p : pairs) {
    if (!p.second->terminal()) open.push_back(std::move(p));
  }
  std::mt19937_64 rng(2);
  std::shuffle(open.begin(), open.end(), rng);
  int optimal = 0;
  for (int i = 0; i < kUctPositions; ++i) {
    const auto& [o, s] = open[i];
    mcts::SearchConfig cfg;
    cfg.mode = mcts::Mode::UCT;
    cfg.k = 1;
    cfg.simulations = kUctSims;
    cfg.seed = std::uint64_t(i);
    const auto r = mcts::run_search(s, cfg);
    const auto best = mm.optimal_columns(o);
    if (std::find(best.begin(), best.end(), s->action_space().triple(r.action).col) != best.end()) ++optimal;
  }
  const double secs = seconds_since(t0);
  return {optimal >= kUctOptimalNeeded && secs < kUctSeconds,
          fmt("%d/%d minimax-optimal moves at M=%d (need %d, %.1fs)", optimal, kUctPositions, kUctSims,
              kUctOptimalNeeded, secs)};
}

// ---------------------------------------------------------------- network

Outcome gradients(const fs::path&) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3);
  struct Layer {
    const char* name;
    testing::GradCheck (*check)(std::mt19937_64&);
  };
  const Layer layers[] = {{"conv", testing::check_conv2d},       {"dense", testing::check_dense},
                          {"pool", testing::check_global_pool}, {"relu", testing::check_relu},
                          {"network", testing::check_network}};
  double worst = 0;
  std::string where;
  std::size_t checked = 0;
  for (const auto& l : layers) {
    for (int i = 0; i < kGradConfigs; ++i) {
      const auto g = l.check(rng);
      checked += g.checked;
      if (g.max_rel_error > worst) {
        worst = g.max_rel_error;
        where = std::string(l.name) + " " + g.worst;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < kGradTolerance && secs < kGradSeconds,
          fmt("max relative error %.2e over %zu partials, %d configurations x 5 layer types (%.1fs)%s", worst, checked,
              kGradConfigs, secs, worst < kGradTolerance ? "" : (" worst: " + where).c_str())};
}

nn::NetworkSpec small_spec() {
  nn::NetworkSpec s;
  s.input_channels = 3;
  s.trunk_channels = 8;
  s.residual_blocks = 2;
  s.kernel_size = 3;
  s.policy_channels = 2;
  s.value_pool_channels = 4;
  s.value_hidden = 8;
  return s;
}

Tensor<float> random_input(std::size_t c, std::size_t h, std::size_t w, std::mt19937_64& rng) {
  Tensor<float> t({c, h, w});
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (auto& v : t.values()) v = u(rng);
  return t;
}

double max_output_diff(const nn::Network<float>& a, const nn::Network<float>& b, std::mt19937_64& rng) {
  double worst = 0;
  for (int i = 0; i < kGrowthInputs; ++i) {
    const auto x = random_input(3, 1 + rng() % 9, 1 + rng() % 9, rng);
    const auto ya = nn::forward(a, x), yb = nn::forward(b, x);
    if (ya.policy.shape() != yb.policy.shape()) return INFINITY;
    worst = std::max(worst, std::abs(double(ya.value) - double(yb.value)));
    for (std::size_t j = 0; j < ya.policy.size(); ++j) {
      worst = std::max(worst, std::abs(double(ya.policy[j]) - double(yb.policy[j])));
    }
  }
  return worst;
}

Outcome growth(const fs::path&) {
  std::mt19937_64 rng(4);
  const auto net = nn::Network<float>::random(small_spec(), rng);
  const auto block = nn::grow_add_block(net, rng);
  const auto channels = nn::grow_add_channels(net, nn::LayerGroup::Trunk, 4, rng);
  const auto kernel = nn::grow_kernel(net, 5);
  const double d_block = max_output_diff(net, block, rng);
  const double d_channels = max_output_diff(net, channels, rng);
  const double d_kernel = max_output_diff(net, kernel, rng);

  // All three applied, then plain SGD on one fixed batch.
  auto grown = nn::grow_kernel(nn::grow_add_channels(nn::grow_add_block(net, rng), nn::LayerGroup::Trunk, 4, rng), 5);
  const auto batch = testing::random_examples(grown.spec, 5, 5, 16, rng);
  auto loss = [&] { return nn::batch_loss<float, testing::DoubleExample>(grown, batch, 1e-4).total(); };
  const double before = loss();
  int first_drop = -1;
  for (int step = 1; step <= kGrowthSteps; ++step) {
    auto g = nn::Weights<float>::zeros(grown.spec);
    nn::batch_loss<float, testing::DoubleExample>(grown, batch, 1e-4, &g);
    nn::sgd_step(grown.weights, g, 0.01);
    if (first_drop < 0 && loss() < before) first_drop = step;
  }
  const double after = loss();
  const bool exact = d_block == 0 && d_channels == 0 && d_kernel == 0;
  return {exact && after < before && first_drop > 0,
          fmt("max |diff| block %g, channels %g, kernel %g over %d inputs each; loss %.4f -> %.4f after %d steps", d_block,
              d_channels, d_kernel, kGrowthInputs, before, after, kGrowthSteps)};
}

Outcome checkpoints(const fs::path& dir) {
  std::mt19937_64 rng(5);
  int identical = 0, rejected = 0, grown_count = 0;
  for (int i = 0; i < kCheckpointNetworks; ++i) {
    nn::NetworkSpec s;
    s.input_channels = 1 + int(rng() % 4);
    s.trunk_channels = 1 + int(rng() % 8);
    s.residual_blocks = 1 + int(rng() % 3);
    s.kernel_size = rng() % 2 ? 3 : 1;
    s.policy_channels = 1 + int(rng() % 3);
    s.value_pool_channels = 1 + int(rng() % 4);
    s.value_hidden = 1 + int(rng() % 8);
    auto net = nn::Network<float>::random(s, rng);
    switch (i % 4) {
      case 1: net = nn::grow_add_block(net, rng); break;
      case 2: net = nn::grow_add_channels(net, nn::LayerGroup::Trunk, 1 + int(rng() % 4), rng); break;
      case 3: net = nn::grow_kernel(net, net.spec.kernel_size + 2); break;
      default: break;
    }
    grown_count += i % 4 != 0;
    std::optional<double> elo;
    if (rng() % 2) elo = std::normal_distribution<double>(1500, 200)(rng);
    const nn::Checkpoint ck{"hex" + std::to_string(3 + i % 9), net, rng() % 100000, elo};
    const auto path = dir / ("ck" + std::to_string(i) + ".zgn");
    nn::save_checkpoint(ck, path);
    const auto bytes = read_bytes(path);
    const auto back = nn::load_checkpoint(path);
    if (back == ck && nn::serialize_checkpoint(back) == bytes) ++identical;

    auto bad = bytes;
    bad[16 + rng() % (bad.size() - 16)] ^= std::uint8_t(1 + rng() % 255);
    std::ofstream(path, std::ios::binary | std::ios::trunc).write(reinterpret_cast<const char*>(bad.data()),
                                                                 std::streamsize(bad.size()));
    try {
      nn::load_checkpoint(path);
    } catch (const nn::CheckpointError& e) {
      if (e.kind() == nn::CheckpointError::Kind::Checksum) ++rejected;
    }
  }
  return {identical == kCheckpointNetworks && rejected == kCheckpointNetworks,
          fmt("%d/%d bit-identical round trips (%d grown), %d/%d corrupted files rejected by checksum", identical,
              kCheckpointNetworks, grown_count, rejected, kCheckpointNetworks)};
}

// ---------------------------------------------------------------- tournament

double rating_sum(const tournament::EloPool& pool) {
  double s = pool.dev_rating();
  for (const auto& m : pool.members()) s += m.rating;
  return s;
}

Outcome tournament_mode(const fs::path& dir) {
  std::mt19937_64 rng(6);

  tournament::EloPool pool;
  std::size_t largest = 0;
  for (int i = 0; i < kAdmissions; ++i) {
    pool.admit("c" + std::to_string(i));
    largest = std::max(largest, pool.size());
    for (int g = 0; g < 3; ++g) {
      if (auto m = pool.select_opponent(rng)) pool.record_result(m->id, tournament::GameResult(rng() % 3));
    }
  }

  // Selection frequencies against a spread of ratings.
  std::ofstream(dir / "ledger.txt") << [&] {
    std::ostringstream os;
    os.precision(17);
    os << "dev 1500\n";
    std::normal_distribution<double> n(1500, 200);
    for (int i = 0; i < kPoolCapacity; ++i) os << "m" << i << ' ' << n(rng) << " 0\n";
    return os.str();
  }();
  const auto spread = tournament::EloPool::load(dir / "ledger.txt");
  const auto members = spread.members();
  std::vector<double> weight(members.size());
  double wsum = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    wsum += weight[i] = std::exp(-(spread.dev_rating() - members[i].rating) / 400);
  }
  std::vector<int> seen(members.size(), 0);
  for (int d = 0; d < kSelectionDraws; ++d) ++seen[std::stoi(spread.select_opponent(rng)->id.substr(1))];
  double chi2 = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double e = kSelectionDraws * weight[i] / wsum;
    chi2 += (seen[i] - e) * (seen[i] - e) / e;
  }
  const double p =
      boost::math::cdf(boost::math::complement(boost::math::chi_squared(double(members.size() - 1)), chi2));

  tournament::EloPool conserve;
  for (int i = 0; i < kPoolCapacity; ++i) conserve.admit("m" + std::to_string(i));
  const double before = rating_sum(conserve);
  for (int t = 0; t < kEloUpdates; ++t) {
    conserve.record_result("m" + std::to_string(rng() % kPoolCapacity), tournament::GameResult(rng() % 3));
  }
  const double drift = std::abs(rating_sum(conserve) - before);

  return {largest <= std::size_t(kPoolCapacity) && p > kChiSquareP && drift <= kEloTolerance,
          fmt("max pool size %zu over %d admissions; selection chi2 %.2f p=%.3f over %d draws; rating drift %.2e "
              "after %d updates",
              largest, kAdmissions, chi2, p, kSelectionDraws, drift, kEloUpdates)};
}

// ---------------------------------------------------------------- training

train::TrainLoopConfig small_run(const fs::path& out) {
  train::TrainLoopConfig c;
  c.game = "connect3x3k3";
  c.batch_size = 16;
  c.buffer_capacity = 64;
  c.simulations = 8;
  c.checkpoint_interval = 10;
  c.trunk_channels = 8;
  c.residual_blocks = 1;
  c.value_pool_channels = 4;
  c.value_hidden = 8;
  c.seed = 77;
  c.synchronous = true;
  c.out_dir = out.string();
  return c;
}

Outcome replay_discipline(const fs::path& dir) {
  auto c = small_run(dir / "replay");
  c.max_games = 120;
  train::TrainLoop loop(c);
  const auto stats = loop.run();
  const auto audit = loop.buffer().audit();
  const bool lossless = loop.buffer().total_pushed() == stats.samples;

  // No producers: the trainer must wait, not spin through stale data.
  auto idle_cfg = small_run(dir / "idle");
  idle_cfg.synchronous = false;
  idle_cfg.workers = 0;
  train::TrainLoop idle(idle_cfg);
  std::thread t([&] { idle.run(); });
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  idle.request_stop();
  t.join();
  const auto idle_stats = idle.stats();

  // A starved draw consumes nothing.
  train::ReplayBuffer b(16);
  mcts::Rng rng(7);
  for (int i = 0; i < 4; ++i) {
    train::Sample s;
    s.reward = float(i);
    b.push(s);
  }
  const bool starved = !b.sample_batch(8, rng);
  bool untouched = b.total_sampled() == 0 && b.size() == 4;
  for (std::size_t i = 0; i < 4; ++i) untouched = untouched && b.reuse(i) == 0 && b.at(i).reward == float(i);

  return {audit.max_reuse == train::kMaxReuse && audit.out_of_order_overwrites == 0 && audit.overwrites > 0 &&
              lossless && idle_stats.steps == 0 && idle_stats.starved_waits > 0 && starved && untouched,
          fmt("max reuse %d over %llu steps, %llu overwrites (%llu out of order), %llu/%llu samples kept; idle "
              "trainer waited %llu times with %llu steps; starved draw %s",
              audit.max_reuse, (unsigned long long)stats.steps, (unsigned long long)audit.overwrites,
              (unsigned long long)audit.out_of_order_overwrites, (unsigned long long)loop.buffer().total_pushed(),
              (unsigned long long)stats.samples, (unsigned long long)idle_stats.starved_waits,
              (unsigned long long)idle_stats.steps, starved && untouched ? "consumed nothing" : "lost data")};
}

Outcome determinism(const fs::path& dir) {
  auto run = [&](const std::string& sub) {
    auto c = small_run(dir / sub);
    c.max_steps = kDeterminismSteps;
    train::TrainLoop loop(c);
    const auto stats = loop.run();
    std::vector<std::vector<std::uint8_t>> files;
    for (const auto& p : stats.checkpoints) files.push_back(read_bytes(p));
    files.push_back(read_bytes(loop.final_path()));
    return std::make_pair(stats.steps, files);
  };
  const auto [steps_a, a] = run("det_a");
  const auto [steps_b, b] = run("det_b");
  const bool same = a == b && !a.back().empty();
  return {same && steps_a == std::uint64_t(kDeterminismSteps) && steps_b == steps_a,
          fmt("%llu steps twice: %zu checkpoint files %s", (unsigned long long)steps_a, a.size(),
              same ? "byte-identical" : "differ")};
}

play::ArenaResult engine_vs(const StatePtr& initial, const nn::Network<float>& net, play::Agent& rival,
                            std::uint64_t seed, int opening) {
  mcts::SearchConfig cfg;
  cfg.simulations = kArenaSims;
  play::EngineAgent engine(std::make_shared<const nn::Network<float>>(net), cfg, "trained");
  return play::arena(initial, engine, rival, kArenaGames, {seed, opening});
}

// Hex 7x7 run whose model is then played on larger boards.
train::TrainLoopConfig hex_run(const fs::path& out) {
  train::TrainLoopConfig c;
  c.game = "hex7";
  c.trunk_channels = 16;
  c.residual_blocks = 2;
  c.simulations = 64;
  c.max_games = 300;
  c.batch_size = 32;
  c.learning_rate = 0.05;
  c.buffer_capacity = 20000;
  c.checkpoint_interval = 500;
  c.seed = 1;
  c.synchronous = true;
  c.out_dir = out.string();
  return c;
}

Outcome scale_invariance(const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  train::TrainLoop loop(hex_run(dir / "hex7"));
  const auto stats = loop.run();
  const auto ck = nn::load_checkpoint(loop.final_path());
  std::string shapes;
  bool shapes_ok = true;
  for (int n : {9, 11, 13}) {
    const auto s = games::make_game("hex" + std::to_string(n));
    const auto out = nn::forward(ck.network, s->encode());
    const auto space = s->action_space();
    const bool ok = out.policy.shape() == std::vector<std::size_t>{std::size_t(space.channels),
                                                                   std::size_t(space.height),
                                                                   std::size_t(space.width)} &&
                    std::isfinite(out.value) && out.value > -1 && out.value < 1;
    shapes_ok = shapes_ok && ok;
    shapes += fmt(" %dx%d:%s", n, n, ok ? "ok" : "bad");
  }
  play::RandomAgent random;
  const auto r = engine_vs(games::make_game("hex9"), ck.network, random, 11, 0);
  return {shapes_ok && r.wins >= kScaleWinsNeeded,
          fmt("hex7 model (%llu games, %llu steps) shapes%s; hex9 vs random %d-%d-%d at M=%d (need %d wins, %.0fs)",
              (unsigned long long)stats.games, (unsigned long long)stats.steps, shapes.c_str(), r.wins, r.draws,
              r.losses, kArenaSims, kScaleWinsNeeded, seconds_since(t0))};
}

train::TrainLoopConfig e2e_run(const fs::path& out) {
  train::TrainLoopConfig c;
  c.game = "connect4x4k3";
  c.trunk_channels = 16;
  c.residual_blocks = 2;
  c.simulations = 64;
  c.max_games = 2000;
  c.batch_size = 16;
  c.learning_rate = 0.03;
  c.buffer_capacity = 20000;
  c.checkpoint_interval = 500;
  c.seed = 1;
  c.synchronous = true;
  c.out_dir = out.string();
  return c;
}

Outcome end_to_end(const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  train::TrainLoop loop(e2e_run(dir / "e2e"));
  const auto stats = loop.run();
  const double train_secs = seconds_since(t0);
  const auto final = nn::load_checkpoint(loop.final_path());
  const auto step0 = nn::load_checkpoint(stats.checkpoints.front());
  const auto initial = games::make_game("connect4x4k3");

  play::RandomAgent random;
  const auto vs_random = engine_vs(initial, final.network, random, 21, 0);
  // Deterministic engines replay one game per colour; a random first ply
  // gives distinct games without changing the theoretical result (every
  // first move wins for the first player on this board).
  mcts::SearchConfig cfg;
  cfg.simulations = kArenaSims;
  play::EngineAgent baseline(std::make_shared<const nn::Network<float>>(step0.network), cfg, "step0");
  const auto vs_step0 = engine_vs(initial, final.network, baseline, 22, 1);
  const double secs = seconds_since(t0);
  return {vs_random.wins >= kE2eVsRandomNeeded && vs_step0.wins >= kE2eVsStepZeroNeeded && secs < kE2eSeconds,
          fmt("%llu games, %llu steps in %.0fs; vs random %d-%d-%d (need %d), vs step-0 %d-%d-%d (need %d); %.0fs total",
              (unsigned long long)stats.games, (unsigned long long)stats.steps, train_secs, vs_random.wins,
              vs_random.draws, vs_random.losses, kE2eVsRandomNeeded, vs_step0.wins, vs_step0.draws, vs_step0.losses,
              kE2eVsStepZeroNeeded, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"hex-no-draw", hex_no_draw},
      {"rules-oracle", rules_oracle},
      {"search-strength", uct_strength},
      {"gradient-checks", gradients},
      {"growth", growth},
      {"scale-invariance", scale_invariance},
      {"end-to-end", end_to_end},
      {"tournament", tournament_mode},
      {"replay-discipline", replay_discipline},
      {"checkpoint-round-trip", checkpoints},
      {"determinism", determinism},
  };
  std::vector<std::string> only(argv + 1, argv + argc);
  if (only.size() == 1 && only[0] == "--list") {
    for (const auto& c : all) std::printf("%s\n", c.name.c_str());
    return 0;
  }
  for (const auto& name : only) {
    if (std::none_of(all.begin(), all.end(), [&](const Criterion& c) { return c.name == name; })) {
      std::fprintf(stderr, "unknown criterion '%s' (see --list)\n", name.c_str());
      return 2;
    }
  }

  const fs::path root = fs::temp_directory_path() / ("zerogames_acceptance_" + std::to_string(::getpid()));
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    const fs::path dir = root / c.name;
    fs::create_directories(dir);
    Outcome o;
    try {
      o = c.run(dir);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    ++ran;
    failed += !o.pass;
    std::printf("%s %-22s %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(root);
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
