// core/include/srak/models/phoneme.h

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

#ifndef SRAK_MODELS_PHONEME_H_
#define SRAK_MODELS_PHONEME_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srak/grad/ops.h"
#include "srak/grad/tensor.h"

namespace srak {
namespace models {

// Small frame classifier over the fixed phoneme inventory. Predicts the
// phoneme active at the frame center.
struct PhonemeNet {
  grad::Tensor conv1_w, conv1_b, conv1_gamma, conv1_beta;
  grad::BatchNormState conv1_bn;
  grad::Tensor conv2_w, conv2_b, conv2_gamma, conv2_beta;
  grad::BatchNormState conv2_bn;
  grad::Tensor conv3_w, conv3_b, conv3_gamma, conv3_beta;
  grad::BatchNormState conv3_bn;
  grad::Tensor fc1_w, fc1_b;
  grad::Tensor fc2_w, fc2_b;
  int num_phonemes = 0;
};

PhonemeNet phoneme_init(std::uint64_t seed, int num_phonemes);

// frames [batch, 3200] -> pre-softmax scores [batch, P].
grad::Tensor phoneme_scores(PhonemeNet& net, const grad::Tensor& frames, bool train);

// frames [batch, 3200] -> posterior rows (softmax of the scores).
grad::Tensor phoneme_forward(PhonemeNet& net, const grad::Tensor& frames, bool train);

std::vector<grad::Tensor> phoneme_parameters(PhonemeNet& net);
std::vector<std::pair<std::string, grad::Tensor>> phoneme_named_parameters(PhonemeNet& net);
std::vector<std::pair<std::string, std::vector<float>*>> phoneme_named_buffers(PhonemeNet& net);

}  // namespace models
}  // namespace srak

#endif  // SRAK_MODELS_PHONEME_H_
