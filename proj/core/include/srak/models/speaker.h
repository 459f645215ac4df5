// core/include/srak/models/speaker.h

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

#ifndef SRAK_MODELS_SPEAKER_H_
#define SRAK_MODELS_SPEAKER_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srak/grad/ops.h"
#include "srak/grad/tensor.h"

namespace srak {
namespace models {

inline constexpr std::int64_t kFrameLen = 3200;
inline constexpr std::int64_t kSincFilters = 80;
inline constexpr std::int64_t kSincKernel = 251;
inline constexpr std::int64_t kSincStride = 40;
inline constexpr float kSincMinHz = 50.0f;

// Raw-waveform speaker classifier: learnable band-pass front end, two conv
// blocks, two affine layers. Frame-level logits; sentence decisions aggregate
// frames elsewhere.
struct SpeakerNet {
  grad::Tensor f1_hz;     // [80] low band edge, pre-reparameterization
  grad::Tensor bw_hz;     // [80] bandwidth
  grad::Tensor sinc_bias; // [80]
  grad::Tensor sinc_gamma, sinc_beta;
  grad::BatchNormState sinc_bn;

  grad::Tensor conv1_w, conv1_b, conv1_gamma, conv1_beta;
  grad::BatchNormState conv1_bn;
  grad::Tensor conv2_w, conv2_b, conv2_gamma, conv2_beta;
  grad::BatchNormState conv2_bn;

  grad::Tensor fc1_w, fc1_b;
  grad::Tensor fc2_w, fc2_b;
  int num_speakers = 0;
};

SpeakerNet speaker_init(std::uint64_t seed, int num_speakers);

// frames [batch, 3200] -> logits [batch, num_speakers]. Differentiable w.r.t.
// the frames whether or not the parameters are frozen.
grad::Tensor speaker_forward(SpeakerNet& net, const grad::Tensor& frames, bool train);

std::vector<grad::Tensor> speaker_parameters(SpeakerNet& net);
std::vector<std::pair<std::string, grad::Tensor>> speaker_named_parameters(SpeakerNet& net);
std::vector<std::pair<std::string, std::vector<float>*>> speaker_named_buffers(SpeakerNet& net);

}  // namespace models
}  // namespace srak

#endif  // SRAK_MODELS_SPEAKER_H_
