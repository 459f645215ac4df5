// core/src/models/attacker.cc

// Copyright 2026  srak authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "srak/models/attacker.h"

#include "srak/common/error.h"
#include "srak/models/init.h"

namespace srak {
namespace models {

using grad::Tensor;

namespace {
constexpr std::int64_t kDilations[5] = {1, 2, 5, 2, 1};
}

AttackerNet attacker_init(std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x47ACULL));
  AttackerNet net;
  net.blocks.resize(5);
  for (int i = 0; i < 5; ++i) {
    AttackerBlock& b = net.blocks[static_cast<std::size_t>(i)];
    const std::int64_t ch_in = i == 0 ? 1 : kAttackerChannels;
    const std::int64_t ch_out = i == 4 ? 1 : kAttackerChannels;
    b.dilation = kDilations[i];
    if (i == 4) {
      // zero output adapter: forward(x) == x until the first step
      b.weight = zeros_param({ch_out, ch_in, kAttackerKernel});
      b.bias = zeros_param({ch_out});
    } else {
      b.weight = conv_init(rng, ch_out, ch_in, kAttackerKernel);
      b.bias = zeros_param({ch_out});
      b.gamma = ones_param({ch_out});
      b.beta = zeros_param({ch_out});
      b.bn_state = grad::BatchNormState(ch_out);
    }
  }
  return net;
}

grad::Tensor attacker_forward(AttackerNet& net, const grad::Tensor& input, bool train) {
  if (input.rank() != 3 || input.dim(1) != 1)
    throw ValidationError("attacker_forward: expected input [batch, 1, len]");
  if (input.dim(2) < 1) throw ValidationError("attacker_forward: input length must be >= 1");

  Tensor h = input;
  for (std::size_t i = 0; i < net.blocks.size(); ++i) {
    AttackerBlock& b = net.blocks[i];
    h = grad::conv1d(h, b.weight, b.bias, b.dilation, /*padding=*/b.dilation);
    if (b.gamma.defined()) {
      h = grad::batchnorm1d(h, b.gamma, b.beta, &b.bn_state, train);
      h = grad::relu(h);
    }
  }
  return grad::add(input, h);
}

audio::Waveform attacker_process(AttackerNet& net, const audio::Waveform& w) {
  if (w.samples.empty()) throw ValidationError("attacker_process: empty waveform");
  Tensor x = Tensor::from_vector({1, 1, static_cast<std::int64_t>(w.samples.size())},
                                 w.samples);
  const Tensor y = attacker_forward(net, x, /*train=*/false);
  audio::Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples = y.data_vector();
  return out;
}

std::vector<Tensor> attacker_parameters(AttackerNet& net) {
  std::vector<Tensor> out;
  for (AttackerBlock& b : net.blocks) {
    out.push_back(b.weight);
    out.push_back(b.bias);
    if (b.gamma.defined()) {
      out.push_back(b.gamma);
      out.push_back(b.beta);
    }
  }
  return out;
}

std::vector<std::pair<std::string, Tensor>> attacker_named_parameters(AttackerNet& net) {
  std::vector<std::pair<std::string, Tensor>> out;
  for (std::size_t i = 0; i < net.blocks.size(); ++i) {
    AttackerBlock& b = net.blocks[i];
    const std::string p = "block" + std::to_string(i) + ".";
    out.emplace_back(p + "weight", b.weight);
    out.emplace_back(p + "bias", b.bias);
    if (b.gamma.defined()) {
      out.emplace_back(p + "gamma", b.gamma);
      out.emplace_back(p + "beta", b.beta);
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<float>*>> attacker_named_buffers(AttackerNet& net) {
  std::vector<std::pair<std::string, std::vector<float>*>> out;
  for (std::size_t i = 0; i < net.blocks.size(); ++i) {
    AttackerBlock& b = net.blocks[i];
    if (!b.gamma.defined()) continue;
    const std::string p = "block" + std::to_string(i) + ".";
    out.emplace_back(p + "running_mean", &b.bn_state.running_mean);
    out.emplace_back(p + "running_var", &b.bn_state.running_var);
  }
  return out;
}

}  // namespace models
}  // namespace srak
