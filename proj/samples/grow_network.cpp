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

// Grows a network three ways and checks that it still computes the same
// function on a real position.

#include <cstdio>
#include <random>

#include "zerogames/games/registry.hpp"
#include "zerogames/nn/growth.hpp"

namespace nn = zg::nn;

double max_diff(const nn::Output<float>& a, const nn::Output<float>& b) {
  double d = std::abs(double(a.value) - double(b.value));
  for (std::size_t i = 0; i < a.policy.size(); ++i) d = std::max(d, std::abs(double(a.policy[i]) - double(b.policy[i])));
  return d;
}

int main() {
  std::mt19937_64 rng(7);
  auto state = zg::games::make_game("hex7")->apply(24);
  const auto x = state->encode();

  nn::NetworkSpec spec;
  spec.input_channels = int(x.dim(0));
  spec.policy_channels = state->action_space().channels;
  auto net = nn::Network<float>::random(spec, rng);
  const auto before = nn::forward(net, x);

  auto deeper = nn::grow_add_block(net, rng);
  auto wider = nn::grow_add_channels(deeper, nn::LayerGroup::Trunk, 8, rng);
  auto larger = nn::grow_kernel(wider, 5);
  for (const auto* n : {&net, &deeper, &wider, &larger}) {
    std::printf("blocks %d  channels %d  kernel %d  params %zu  max |diff| %g\n", n->spec.residual_blocks,
                n->spec.trunk_channels, n->spec.kernel_size, n->weights.parameter_count(),
                max_diff(before, nn::forward(*n, x)));
  }
}
