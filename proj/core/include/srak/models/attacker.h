// core/include/srak/models/attacker.h

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

#ifndef SRAK_MODELS_ATTACKER_H_
#define SRAK_MODELS_ATTACKER_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srak/audio/wav.h"
#include "srak/grad/ops.h"
#include "srak/grad/tensor.h"

namespace srak {
namespace models {

// Residual perturbation generator. Five dilated conv blocks, 32 channels
// inside, 1-channel adapters at both ends; the block-stack output is added
// onto the input. The final conv starts at exactly zero, so an untrained net
// is the identity.
struct AttackerBlock {
  grad::Tensor weight;  // [ch_out, ch_in, 3]
  grad::Tensor bias;    // [ch_out]
  grad::Tensor gamma;   // undefined for the output adapter
  grad::Tensor beta;
  grad::BatchNormState bn_state;
  std::int64_t dilation = 1;
};

struct AttackerNet {
  std::vector<AttackerBlock> blocks;  // 5
};

inline constexpr std::int64_t kAttackerChannels = 32;
inline constexpr std::int64_t kAttackerKernel = 3;
// 1 + 2 * (1 + 2 + 5 + 2 + 1), kernel 3 at each dilation
inline constexpr std::int64_t kAttackerReceptiveField = 23;

AttackerNet attacker_init(std::uint64_t seed);

// input [batch, 1, len] -> same shape. Length is preserved for any len >= 1;
// train toggles the batchnorm mode.
grad::Tensor attacker_forward(AttackerNet& net, const grad::Tensor& input, bool train);

// Whole-waveform eval-mode pass, no recording. Arbitrary length >= 1.
audio::Waveform attacker_process(AttackerNet& net, const audio::Waveform& w);

std::vector<grad::Tensor> attacker_parameters(AttackerNet& net);
std::vector<std::pair<std::string, grad::Tensor>> attacker_named_parameters(AttackerNet& net);
std::vector<std::pair<std::string, std::vector<float>*>> attacker_named_buffers(AttackerNet& net);

}  // namespace models
}  // namespace srak

#endif  // SRAK_MODELS_ATTACKER_H_
