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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace zg::tournament {

enum class GameResult { Win, Draw, Loss };  // from the dev model's side

inline double score_of(GameResult r) {
  switch (r) {
    case GameResult::Win: return 1.0;
    case GameResult::Draw: return 0.5;
    case GameResult::Loss: return 0.0;
  }
  return 0.5;
}

struct RatedCheckpoint {
  std::string id;
  double rating = 0.0;
  int games = 0;
  std::uint64_t admitted = 0;  // admission order, used to break removal ties

  friend bool operator==(const RatedCheckpoint&, const RatedCheckpoint&) = default;
};

class UnknownMemberError : public std::out_of_range {
 public:
  explicit UnknownMemberError(const std::string& id) : std::out_of_range("no pool member named " + id) {}
};

// Weight of a member when choosing a self-play opponent: members rated close
// to (or above) the dev model are preferred.
inline double selection_weight(double dev_rating, double rating) {
  return std::exp(-(dev_rating - rating) / 400.0);
}

// Probability that the dev model beats a member under the logistic model.
inline double expected_score(double dev_rating, double rating) {
  return 1.0 / (1.0 + std::pow(10.0, (rating - dev_rating) / 400.0));
}

// Up to ten rated checkpoints plus the rating of the model being trained. All
// members are rated only from games against dev. Every operation locks, so one
// pool can be shared by the trainer and the self-play workers.
class EloPool {
 public:
  static constexpr std::size_t kCapacity = 10;
  static constexpr double kK = 32.0;

  explicit EloPool(double dev_rating = 1500.0) : dev_rating_(dev_rating) {}

  EloPool(const EloPool& other) {
    std::lock_guard lock(other.mu_);
    members_ = other.members_;
    dev_rating_ = other.dev_rating_;
    next_serial_ = other.next_serial_;
  }

  double dev_rating() const {
    std::lock_guard lock(mu_);
    return dev_rating_;
  }

  std::vector<RatedCheckpoint> members() const {
    std::lock_guard lock(mu_);
    return members_;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return members_.size();
  }

  std::optional<RatedCheckpoint> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    for (const auto& m : members_) {
      if (m.id == id) return m;
    }
    return std::nullopt;
  }

  // Selection probabilities in member order.
  std::vector<double> selection_probabilities() const {
    std::lock_guard lock(mu_);
    return probabilities_locked();
  }

  // A member, or nullopt meaning plain self-play (empty pool).
  template <typename Rng>
  std::optional<RatedCheckpoint> select_opponent(Rng& rng) const {
    std::lock_guard lock(mu_);
    if (members_.empty()) return std::nullopt;
    auto p = probabilities_locked();
    std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
    return members_[pick(rng)];
  }

  void record_result(const std::string& id, GameResult result) {
    std::lock_guard lock(mu_);
    auto it = std::find_if(members_.begin(), members_.end(), [&](const auto& m) { return m.id == id; });
    if (it == members_.end()) throw UnknownMemberError(id);
    const double delta = kK * (score_of(result) - expected_score(dev_rating_, it->rating));
    dev_rating_ += delta;
    it->rating -= delta;
    it->games += 1;
  }

  // Adds a checkpoint at the dev rating. Returns the member removed to make
  // room, if any: the lowest rated, oldest first on ties.
  std::optional<RatedCheckpoint> admit(const std::string& id) {
    std::lock_guard lock(mu_);
    for (const auto& m : members_) {
      if (m.id == id) throw std::invalid_argument("checkpoint " + id + " is already in the pool");
    }
    std::optional<RatedCheckpoint> removed;
    if (members_.size() >= kCapacity) {
      auto worst = std::min_element(members_.begin(), members_.end(), [](const auto& a, const auto& b) {
        return a.rating != b.rating ? a.rating < b.rating : a.admitted < b.admitted;
      });
      removed = *worst;
      members_.erase(worst);
    }
    members_.push_back({id, dev_rating_, 0, next_serial_++});
    return removed;
  }

  // Ledger: "dev <rating>" then one "<id> <rating> <games>" line per member
  // in admission order.
  void save(const std::filesystem::path& path) const {
    std::ostringstream os;
    os << std::setprecision(17);
    {
      std::lock_guard lock(mu_);
      os << "dev " << dev_rating_ << '\n';
      for (const auto& m : members_) os << m.id << ' ' << m.rating << ' ' << m.games << '\n';
    }
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream f(tmp, std::ios::trunc);
      f << os.str();
      if (!f) throw std::runtime_error("cannot write pool ledger " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  static EloPool load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open pool ledger " + path.string());
    EloPool pool;
    std::string line;
    int lineno = 0;
    bool have_dev = false;
    while (std::getline(f, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string id;
      double rating;
      ls >> id >> rating;
      if (!ls) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed ledger line");
      if (!have_dev) {
        if (id != "dev") throw std::runtime_error(path.string() + ": ledger must start with the dev rating");
        pool.dev_rating_ = rating;
        have_dev = true;
        continue;
      }
      int games = 0;
      if (!(ls >> games) || games < 0) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed ledger line");
      }
      if (pool.members_.size() == kCapacity) throw std::runtime_error(path.string() + ": more than ten members");
      pool.members_.push_back({id, rating, games, pool.next_serial_++});
    }
    if (!have_dev) throw std::runtime_error(path.string() + ": empty ledger");
    return pool;
  }

 private:
  std::vector<double> probabilities_locked() const {
    std::vector<double> w;
    double sum = 0;
    for (const auto& m : members_) sum += w.emplace_back(selection_weight(dev_rating_, m.rating));
    for (auto& x : w) x /= sum;
    return w;
  }

  mutable std::mutex mu_;
  std::vector<RatedCheckpoint> members_;
  double dev_rating_ = 1500.0;
  std::uint64_t next_serial_ = 0;
};

// Logistic ELO difference implied by a score fraction; infinite at 0 or 1.
inline double elo_difference(double score) {
  if (score <= 0.0) return -std::numeric_limits<double>::infinity();
  if (score >= 1.0) return std::numeric_limits<double>::infinity();
  return -400.0 * std::log10(1.0 / score - 1.0);
}

}  // namespace zg::tournament
