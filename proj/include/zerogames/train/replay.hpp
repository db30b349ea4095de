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
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "zerogames/game.hpp"

namespace zg::train {

// One visited decision state: its encoding, the search's visit distribution
// (action-space layout) and the final result for the player to move there.
struct Sample {
  FeatureTensor state;
  Tensor<float> policy;
  std::vector<int> legal;
  float reward = 0.0f;

  friend bool operator==(const Sample&, const Sample&) = default;
};

inline constexpr int kMaxReuse = 8;

// Cyclic sample store. A slot may be drawn at most kMaxReuse times between two
// overwrites; when fewer than B slots are still eligible, sampling reports
// starvation instead of reusing data further.
class ReplayBuffer {
 public:
  struct Audit {
    int max_reuse = 0;                  // highest counter ever reached
    std::uint64_t overwrites = 0;
    std::uint64_t out_of_order_overwrites = 0;  // overwrote something other than the oldest sample
  };

  explicit ReplayBuffer(std::size_t capacity, int max_reuse = kMaxReuse) : max_reuse_(max_reuse) {
    if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
    if (max_reuse < 1) throw std::invalid_argument("max reuse must be positive");
    slots_.resize(capacity);
    reuse_.assign(capacity, 0);
    serial_.assign(capacity, 0);
  }

  std::size_t push(Sample s) {
    std::lock_guard lock(mu_);
    const std::size_t slot = cursor_;
    if (size_ == slots_.size()) {
      ++audit_.overwrites;
      if (serial_[slot] != pushed_ - slots_.size()) ++audit_.out_of_order_overwrites;
    } else {
      ++size_;
    }
    slots_[slot] = std::move(s);
    reuse_[slot] = 0;
    serial_[slot] = pushed_++;
    cursor_ = (cursor_ + 1) % slots_.size();
    return slot;
  }

  // B distinct slots drawn uniformly among those with reuse < max, or
  // nullopt (starved) when fewer than B are eligible. Nothing is consumed on
  // starvation.
  template <typename Rng>
  std::optional<std::vector<Sample>> sample_batch(std::size_t batch, Rng& rng) {
    std::lock_guard lock(mu_);
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < size_; ++i) {
      if (reuse_[i] < max_reuse_) eligible.push_back(i);
    }
    if (batch == 0 || eligible.size() < batch) {
      ++starved_;
      return std::nullopt;
    }
    std::vector<Sample> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      const auto j = std::uniform_int_distribution<std::size_t>(i, eligible.size() - 1)(rng);
      std::swap(eligible[i], eligible[j]);
      const std::size_t slot = eligible[i];
      audit_.max_reuse = std::max(audit_.max_reuse, ++reuse_[slot]);
      out.push_back(slots_[slot]);
    }
    sampled_ += batch;
    return out;
  }

  std::size_t capacity() const { return slots_.size(); }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return size_;
  }
  std::size_t cursor() const {
    std::lock_guard lock(mu_);
    return cursor_;
  }
  std::uint64_t total_pushed() const {
    std::lock_guard lock(mu_);
    return pushed_;
  }
  std::uint64_t total_sampled() const {
    std::lock_guard lock(mu_);
    return sampled_;
  }
  std::uint64_t starved_count() const {
    std::lock_guard lock(mu_);
    return starved_;
  }
  int reuse(std::size_t slot) const {
    std::lock_guard lock(mu_);
    return reuse_.at(slot);
  }
  // Push sequence number of the sample held in `slot`.
  std::uint64_t serial(std::size_t slot) const {
    std::lock_guard lock(mu_);
    return serial_.at(slot);
  }
  Sample at(std::size_t slot) const {
    std::lock_guard lock(mu_);
    if (slot >= size_) throw std::out_of_range("replay slot not filled");
    return slots_[slot];
  }
  std::size_t eligible() const {
    std::lock_guard lock(mu_);
    return std::size_t(std::count_if(reuse_.begin(), reuse_.begin() + std::ptrdiff_t(size_),
                                     [&](int r) { return r < max_reuse_; }));
  }
  Audit audit() const {
    std::lock_guard lock(mu_);
    return audit_;
  }

 private:
  mutable std::mutex mu_;
  int max_reuse_;
  std::vector<Sample> slots_;
  std::vector<int> reuse_;
  std::vector<std::uint64_t> serial_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  std::uint64_t pushed_ = 0;
  std::uint64_t sampled_ = 0;
  std::uint64_t starved_ = 0;
  Audit audit_;
};

// Wait schedule for a starved trainer: 10 ms doubling up to 1 s.
class Backoff {
 public:
  using duration = std::chrono::milliseconds;

  explicit Backoff(duration first = duration(10), duration cap = duration(1000)) : first_(first), cap_(cap), next_(first) {}

  duration next() {
    const auto d = next_;
    next_ = std::min(cap_, next_ * 2);
    return d;
  }
  void reset() { next_ = first_; }

 private:
  duration first_, cap_, next_;
};

}  // namespace zg::train
