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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "gradient_check.hpp"
#include "gtest/gtest.h"
#include "zerogames/nn/checkpoint.hpp"
#include "zerogames/nn/growth.hpp"
#include "zerogames/nn/loss.hpp"
#include "zerogames/nn/sgd.hpp"

namespace zg::nn {
namespace {

struct Example {
  Tensor<float> state;
  Tensor<float> policy;
  std::vector<int> legal;
  float reward = 0;
};

NetworkSpec small_spec() {
  NetworkSpec s;
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
  std::normal_distribution<float> n(0.f, 1.f);
  for (auto& v : t.values()) v = n(rng);
  return t;
}

std::vector<Example> random_batch(const NetworkSpec& spec, int n, std::mt19937_64& rng, std::size_t side = 4) {
  std::vector<Example> out;
  for (auto& d : testing::random_examples(spec, side, side, n, rng)) {
    out.push_back({d.state.cast<float>(), d.policy.cast<float>(), d.legal, float(d.reward)});
  }
  // Renormalise in single precision so the target passes validation.
  for (auto& e : out) {
    double s = 0;
    for (float v : e.policy.values()) s += v;
    for (auto& v : e.policy.values()) v = float(v / s);
  }
  return out;
}

// ------------------------------------------------------------ conv2d

TEST(Conv2dTest, OneByOneIdentity) {
  std::mt19937_64 rng(1);
  auto x = random_input(1, 4, 5, rng);
  Tensor<float> w({1, 1, 1, 1}, 1.0f), b({1}, 0.0f);
  EXPECT_EQ(conv2d(x, w, b), x);
}

TEST(Conv2dTest, AllOnesKernelCountsInBoundsTaps) {
  Tensor<float> x({1, 5, 5}, 1.0f), w({1, 1, 3, 3}, 1.0f), b({1}, 0.0f);
  auto y = conv2d(x, w, b);
  EXPECT_EQ(y.at(0, 2, 2), 9.0f);
  EXPECT_EQ(y.at(0, 0, 2), 6.0f);
  EXPECT_EQ(y.at(0, 2, 4), 6.0f);
  EXPECT_EQ(y.at(0, 0, 0), 4.0f);
  EXPECT_EQ(y.at(0, 4, 4), 4.0f);
}

TEST(Conv2dTest, ShapeErrors) {
  Tensor<float> x({2, 3, 3});
  EXPECT_THROW(conv2d(x, Tensor<float>({1, 3, 3, 3}), Tensor<float>({1})), ShapeError);
  EXPECT_THROW(conv2d(x, Tensor<float>({1, 2, 2, 2}), Tensor<float>({1})), ShapeError);
  EXPECT_THROW(conv2d(x, Tensor<float>({1, 2, 3, 3}), Tensor<float>({2})), ShapeError);
}

TEST(GradientTest, LayersMatchFiniteDifferences) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 5; ++i) {
    for (auto check : {testing::check_conv2d, testing::check_dense, testing::check_global_pool, testing::check_relu}) {
      auto r = check(rng);
      EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
    }
  }
}

TEST(GradientTest, NetworkMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3; ++i) {
    auto r = testing::check_network(rng);
    EXPECT_GT(r.checked, 10u);
    EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
  }
}

// ------------------------------------------------------------ pooling

TEST(GlobalPoolTest, ConstantAndHandValues) {
  Tensor<float> c({1, 3, 3}, 2.5f);
  auto p = global_pool(c).features;
  EXPECT_EQ(p[0], 2.5f);
  EXPECT_EQ(p[1], 2.5f);
  Tensor<float> x({1, 2, 2}, std::vector<float>{1, 2, 3, 4});
  auto q = global_pool(x).features;
  EXPECT_EQ(q[0], 4.0f);
  EXPECT_EQ(q[1], 2.5f);
}

TEST(GlobalPoolTest, LengthIndependentOfBoardSize) {
  std::mt19937_64 rng(3);
  EXPECT_EQ(global_pool(random_input(5, 7, 7, rng)).features.size(), 10u);
  EXPECT_EQ(global_pool(random_input(5, 19, 19, rng)).features.size(), 10u);
}

// ------------------------------------------------------------ forward

TEST(ForwardTest, ValueInOpenInterval) {
  std::mt19937_64 rng(5);
  auto net = Network<float>::random(small_spec(), rng);
  for (int i = 0; i < 1000; ++i) {
    auto out = forward(net, random_input(3, 3 + i % 4, 3 + i % 5, rng));
    EXPECT_GT(out.value, -1.0f);
    EXPECT_LT(out.value, 1.0f);
  }
}

TEST(ForwardTest, AnyBoardSize) {
  std::mt19937_64 rng(6);
  auto net = Network<float>::random(small_spec(), rng);
  for (std::size_t n : {1u, 2u, 7u, 9u, 11u}) {
    auto out = forward(net, random_input(3, n, n, rng));
    EXPECT_EQ(out.policy.shape(), (std::vector<std::size_t>{2, n, n}));
    EXPECT_TRUE(std::isfinite(out.value));
  }
  auto wide = forward(net, random_input(3, 3, 8, rng));
  EXPECT_EQ(wide.policy.shape(), (std::vector<std::size_t>{2, 3, 8}));
}

TEST(ForwardTest, ZeroWeights) {
  Network<float> net(small_spec());
  net.weights.value_out.bias[0] = 0.3f;
  std::mt19937_64 rng(8);
  auto out = forward(net, random_input(3, 5, 5, rng));
  for (float v : out.policy.values()) EXPECT_EQ(v, 0.0f);
  EXPECT_FLOAT_EQ(out.value, std::tanh(0.3f));
  const std::vector<int> legal = {0, 3, 7};
  auto p = masked_softmax<float>(out.policy.values(), legal);
  EXPECT_FLOAT_EQ(p[3], 1.0f / 3.0f);
}

TEST(ForwardTest, ChannelMismatch) {
  Network<float> net(small_spec());
  EXPECT_THROW(forward(net, Tensor<float>({2, 4, 4})), ShapeError);
}

TEST(NetworkSpecTest, Validation) {
  NetworkSpec s = small_spec();
  s.kernel_size = 4;
  EXPECT_THROW(s.validate(), ShapeError);
  s = small_spec();
  s.trunk_channels = 0;
  EXPECT_THROW(Network<float>{s}, ShapeError);
  EXPECT_NE(small_spec().hash(), s.hash());
}

// ------------------------------------------------------------ loss

TEST(LossTest, PerfectPredictionGivesEntropy) {
  const std::vector<float> p = {0.f, 0.2f, 0.5f, 0.3f};
  const std::vector<int> legal = {1, 2, 3};
  Tensor<float> logits({1, 1, 4});
  double entropy = 0;
  for (int a : legal) {
    logits[a] = std::log(p[a]) + 1.7f;  // shift-invariant
    entropy -= p[a] * std::log(double(p[a]));
  }
  auto terms = head_loss<float>(logits, legal, p, 0.25f, 0.25f);
  EXPECT_NEAR(terms.policy, entropy, 1e-6);
  EXPECT_EQ(terms.value, 0.0);
}

TEST(LossTest, ValueTermAndDecay) {
  Tensor<float> logits({1, 1, 2});
  const std::vector<float> p = {0.5f, 0.5f};
  auto terms = head_loss<float>(logits, std::vector<int>{0, 1}, p, 0.0f, 1.0f);
  EXPECT_DOUBLE_EQ(terms.value, 1.0);

  NetworkSpec s = small_spec();
  Weights<double> w = Weights<double>::zeros(s);
  w.value_out.weight[0] = 2.0;
  EXPECT_NEAR(weight_decay(w, 0.01), 0.04, 1e-15);
}

TEST(LossTest, RejectsInvalidTarget) {
  Tensor<float> logits({1, 1, 2});
  EXPECT_THROW(head_loss<float>(logits, std::vector<int>{0, 1}, std::vector<float>{0.5f, 0.4f}, 0.f, 0.f), TargetError);
  EXPECT_THROW(head_loss<float>(logits, std::vector<int>{0, 1}, std::vector<float>{1.5f, -0.5f}, 0.f, 0.f), TargetError);
}

TEST(LossProperty, NeverBelowEntropy) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    auto ex = testing::random_examples(small_spec(), 3, 3, 1, rng)[0];
    auto logits = testing::random_tensor(ex.policy.shape(), rng, 2.0);
    double h = 0;
    for (int a : ex.legal) h -= ex.policy[a] > 0 ? ex.policy[a] * std::log(ex.policy[a]) : 0;
    auto t = head_loss<double>(logits, ex.legal, ex.policy.values(), 0.3, ex.reward);
    EXPECT_GE(t.total() - h, -1e-12);
  }
}

// ------------------------------------------------------------ sgd

TEST(SgdTest, StepArithmetic) {
  NetworkSpec s = small_spec();
  auto w = Weights<float>::zeros(s);
  auto g = Weights<float>::zeros(s);
  w.stem.weight[0] = 1.0f;
  g.stem.weight[0] = 0.5f;
  auto frozen = w;
  sgd_step(frozen, g, 0.0);
  EXPECT_EQ(frozen, w);
  sgd_step(w, g, 0.1);
  EXPECT_FLOAT_EQ(w.stem.weight[0], 0.95f);
}

TEST(SgdTest, NonFiniteGradientNamesLayerAndLeavesWeights) {
  NetworkSpec s = small_spec();
  auto w = Weights<float>::zeros(s);
  auto g = Weights<float>::zeros(s);
  g.stem.weight[0] = 1.0f;
  g.value_hidden.bias[1] = std::numeric_limits<float>::quiet_NaN();
  auto before = w;
  try {
    sgd_step(w, g, 0.1);
    FAIL() << "expected NonFiniteGradientError";
  } catch (const NonFiniteGradientError& e) {
    EXPECT_EQ(e.layer(), "value_hidden.bias");
  }
  EXPECT_EQ(w, before);
}

TEST(SgdTest, SmallStepDescends) {
  std::mt19937_64 rng(10);
  auto net = Network<float>::random(small_spec(), rng);
  auto batch = random_batch(net.spec, 8, rng);
  auto grads = Weights<float>::zeros(net.spec);
  const double before = batch_loss<float, Example>(net, batch, 1e-4, &grads).total();
  sgd_step(net.weights, grads, 1e-3);
  const double after = batch_loss<float, Example>(net, batch, 1e-4).total();
  EXPECT_LT(after, before);
}

// ------------------------------------------------------------ growth

double max_abs_diff(const Output<float>& a, const Output<float>& b) {
  double d = std::abs(double(a.value) - double(b.value));
  for (std::size_t i = 0; i < a.policy.size(); ++i) d = std::max(d, std::abs(double(a.policy[i]) - double(b.policy[i])));
  return d;
}

void expect_same_function(const Network<float>& a, const Network<float>& b, std::mt19937_64& rng) {
  for (int i = 0; i < 30; ++i) {
    auto x = random_input(3, 2 + i % 6, 2 + i % 7, rng);
    auto ya = forward(a, x), yb = forward(b, x);
    EXPECT_EQ(max_abs_diff(ya, yb), 0.0);
    EXPECT_EQ(ya.policy.shape(), yb.policy.shape());
  }
}

TEST(GrowthTest, AddBlockPreservesOutputs) {
  std::mt19937_64 rng(11);
  auto net = Network<float>::random(small_spec(), rng);
  auto grown = grow_add_block(net, rng);
  EXPECT_EQ(grown.spec.residual_blocks, net.spec.residual_blocks + 1);
  EXPECT_NO_THROW(grown.validate());
  expect_same_function(net, grown, rng);
}

TEST(GrowthTest, NewBlockReceivesGradient) {
  std::mt19937_64 rng(12);
  auto net = grow_add_block(Network<float>::random(small_spec(), rng), rng);
  auto batch = random_batch(net.spec, 4, rng);
  auto norm = [](const Tensor<float>& t) {
    double s = 0;
    for (float v : t.values()) s += double(v) * v;
    return s;
  };
  auto g1 = Weights<float>::zeros(net.spec);
  batch_loss<float, Example>(net, batch, 0.0, &g1);
  EXPECT_GT(norm(g1.blocks.back().second.weight), 0.0);
  EXPECT_EQ(norm(g1.blocks.back().first.weight), 0.0);  // blocked by the zero second conv
  sgd_step(net.weights, g1, 0.01);
  auto g2 = Weights<float>::zeros(net.spec);
  batch_loss<float, Example>(net, batch, 0.0, &g2);
  EXPECT_GT(norm(g2.blocks.back().first.weight), 0.0);
}

TEST(GrowthTest, AddChannelsPreservesOutputs) {
  std::mt19937_64 rng(13);
  NetworkSpec s = small_spec();
  s.trunk_channels = 16;
  auto net = Network<float>::random(s, rng);
  auto trunk = grow_add_channels(net, LayerGroup::Trunk, 8, rng);
  EXPECT_EQ(trunk.spec.trunk_channels, 24);
  EXPECT_EQ(trunk.weights.stem.weight.dim(0), 24u);
  EXPECT_EQ(trunk.weights.blocks[1].second.weight.dim(1), 24u);
  EXPECT_EQ(trunk.weights.policy.weight.dim(1), 24u);
  EXPECT_EQ(trunk.weights.value_conv.weight.dim(1), 24u);
  EXPECT_NO_THROW(trunk.validate());
  expect_same_function(net, trunk, rng);

  auto pool = grow_add_channels(trunk, LayerGroup::ValuePool, 3, rng);
  EXPECT_EQ(pool.weights.value_hidden.weight.dim(1), 2u * 7u);
  expect_same_function(net, pool, rng);
  auto hidden = grow_add_channels(pool, LayerGroup::ValueHidden, 5, rng);
  EXPECT_EQ(hidden.spec.value_hidden, 13);
  expect_same_function(net, hidden, rng);
  EXPECT_THROW(grow_add_channels(net, LayerGroup::Trunk, 0, rng), std::invalid_argument);
  EXPECT_EQ(parse_layer_group("value_pool"), LayerGroup::ValuePool);
  EXPECT_THROW(parse_layer_group("heads"), std::invalid_argument);
}

TEST(GrowthTest, GrowKernelPreservesOutputsAndEmbedsCentre) {
  std::mt19937_64 rng(14);
  auto net = Network<float>::random(small_spec(), rng);
  auto five = grow_kernel(net, 5);
  auto seven = grow_kernel(net, 7);
  expect_same_function(net, five, rng);
  expect_same_function(net, seven, rng);
  EXPECT_EQ(five.spec.kernel_size, 5);
  for (int o = 0; o < 8; ++o) {
    for (int i = 0; i < 3; ++i) {
      for (int y = 0; y < 5; ++y) {
        for (int x = 0; x < 5; ++x) {
          const float got = five.weights.stem.weight[((o * 3 + i) * 5 + y) * 5 + x];
          const bool inner = y >= 1 && y <= 3 && x >= 1 && x <= 3;
          const float want = inner ? net.weights.stem.weight[((o * 3 + i) * 3 + y - 1) * 3 + x - 1] : 0.0f;
          EXPECT_EQ(got, want);
        }
      }
    }
  }
  EXPECT_THROW(grow_kernel(net, 4), std::invalid_argument);
  EXPECT_THROW(grow_kernel(net, 3), std::invalid_argument);
  EXPECT_THROW(grow_kernel(net, 1), std::invalid_argument);
}

TEST(GrowthTest, TrainingAfterGrowthDoesNotRegress) {
  std::mt19937_64 rng(15);
  auto net = Network<float>::random(small_spec(), rng);
  auto batch = random_batch(net.spec, 16, rng);
  auto grown = grow_add_channels(grow_add_block(net, rng), LayerGroup::Trunk, 4, rng);
  const double at_growth = batch_loss<float, Example>(grown, batch, 1e-4).total();
  for (int step = 0; step < 100; ++step) {
    auto g = Weights<float>::zeros(grown.spec);
    batch_loss<float, Example>(grown, batch, 1e-4, &g);
    sgd_step(grown.weights, g, 0.01);
  }
  const double trained = batch_loss<float, Example>(grown, batch, 1e-4).total();
  EXPECT_LT(trained, at_growth);
}

// ------------------------------------------------------------ checkpoints

class CheckpointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("zg_ckpt_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(CheckpointTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(16);
  Checkpoint ck{"hex7", Network<float>::random(small_spec(), rng), 1234, 1510.25};
  save_checkpoint(ck, dir_ / "a.zgn");
  auto back = load_checkpoint(dir_ / "a.zgn");
  EXPECT_EQ(back, ck);
  EXPECT_EQ(serialize_checkpoint(back), serialize_checkpoint(ck));
  ck.elo.reset();
  EXPECT_EQ(deserialize_checkpoint(serialize_checkpoint(ck)), ck);
}

TEST_F(CheckpointTest, CorruptionIsDetected) {
  std::mt19937_64 rng(17);
  Checkpoint ck{"connect4x4k3", Network<float>::random(small_spec(), rng), 7, std::nullopt};
  const auto bytes = serialize_checkpoint(ck);
  using Kind = CheckpointError::Kind;
  auto kind_of = [](const std::vector<std::uint8_t>& b) {
    try {
      deserialize_checkpoint(b);
    } catch (const CheckpointError& e) {
      return std::optional<Kind>(e.kind());
    }
    return std::optional<Kind>();
  };
  // Any byte after the fixed header flips the checksum.
  for (int t = 0; t < 200; ++t) {
    auto bad = bytes;
    const std::size_t at = 16 + rng() % (bad.size() - 16);
    bad[at] ^= std::uint8_t(1 + rng() % 255);
    EXPECT_EQ(kind_of(bad), Kind::Checksum) << "byte " << at;
  }
  auto truncated = bytes;
  truncated.resize(bytes.size() - 9);
  EXPECT_EQ(kind_of(truncated), Kind::Truncated);
  EXPECT_EQ(kind_of(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 10)), Kind::Truncated);
  auto version = bytes;
  version[4] = 2;
  EXPECT_EQ(kind_of(version), Kind::VersionMismatch);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(kind_of(magic), Kind::BadMagic);
  EXPECT_THROW(load_checkpoint(dir_ / "missing.zgn"), CheckpointError);
}

TEST_F(CheckpointTest, GrownNetworkSurvivesRoundTrip) {
  std::mt19937_64 rng(18);
  auto net = Network<float>::random(small_spec(), rng);
  auto grown = grow_kernel(grow_add_block(net, rng), 5);
  save_checkpoint({"hex5", grown, 0, std::nullopt}, dir_ / "g.zgn");
  auto back = load_checkpoint(dir_ / "g.zgn");
  EXPECT_EQ(back.network.spec, grown.spec);
  expect_same_function(net, back.network, rng);
}

}  // namespace
}  // namespace zg::nn
