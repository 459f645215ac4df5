// core/src/models/phoneme.cc

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

#include "srak/models/phoneme.h"

#include "srak/common/error.h"
#include "srak/models/init.h"
#include "srak/models/speaker.h"

namespace srak {
namespace models {

using grad::Tensor;

namespace {
constexpr float kLeak = 0.2f;
}

PhonemeNet phoneme_init(std::uint64_t seed, int num_phonemes) {
  if (num_phonemes < 2) throw ValidationError("phoneme_init: need at least 2 classes");
  Rng rng(mix_seed(seed, 0xF0EULL));

  PhonemeNet net;
  net.num_phonemes = num_phonemes;
  net.conv1_w = conv_init(rng, 16, 1, 51);
  net.conv1_b = zeros_param({16});
  net.conv1_gamma = ones_param({16});
  net.conv1_beta = zeros_param({16});
  net.conv1_bn = grad::BatchNormState(16);

  net.conv2_w = conv_init(rng, 32, 16, 5);
  net.conv2_b = zeros_param({32});
  net.conv2_gamma = ones_param({32});
  net.conv2_beta = zeros_param({32});
  net.conv2_bn = grad::BatchNormState(32);

  net.conv3_w = conv_init(rng, 32, 32, 3);
  net.conv3_b = zeros_param({32});
  net.conv3_gamma = ones_param({32});
  net.conv3_beta = zeros_param({32});
  net.conv3_bn = grad::BatchNormState(32);

  net.fc1_w = affine_init(rng, 64, 32 * 5);
  net.fc1_b = zeros_param({64});
  net.fc2_w = normal_init(rng, {num_phonemes, 64}, 0.01);
  net.fc2_b = zeros_param({num_phonemes});
  return net;
}

grad::Tensor phoneme_scores(PhonemeNet& net, const grad::Tensor& frames, bool train) {
  if (frames.rank() != 2 || frames.dim(1) != kFrameLen)
    throw ValidationError("phoneme_scores: expected frames [batch, 3200]");
  const std::int64_t b = frames.dim(0);

  Tensor h = grad::reshape(frames, {b, 1, kFrameLen});
  h = grad::conv1d(h, net.conv1_w, net.conv1_b, 1, /*padding=*/25, /*stride=*/8);  // [b,16,400]
  h = grad::batchnorm1d(h, net.conv1_gamma, net.conv1_beta, &net.conv1_bn, train);
  h = grad::leaky_relu(h, kLeak);
  h = grad::maxpool1d(h, 4);  // [b,16,100]

  h = grad::conv1d(h, net.conv2_w, net.conv2_b, 1, 2);
  h = grad::batchnorm1d(h, net.conv2_gamma, net.conv2_beta, &net.conv2_bn, train);
  h = grad::leaky_relu(h, kLeak);
  h = grad::maxpool1d(h, 4);  // [b,32,25]

  h = grad::conv1d(h, net.conv3_w, net.conv3_b, 1, 1);
  h = grad::batchnorm1d(h, net.conv3_gamma, net.conv3_beta, &net.conv3_bn, train);
  h = grad::leaky_relu(h, kLeak);
  h = grad::maxpool1d(h, 5);  // [b,32,5]

  h = grad::reshape(h, {b, 32 * 5});
  h = grad::affine(h, net.fc1_w, net.fc1_b);
  h = grad::leaky_relu(h, kLeak);
  return grad::affine(h, net.fc2_w, net.fc2_b);
}

grad::Tensor phoneme_forward(PhonemeNet& net, const grad::Tensor& frames, bool train) {
  return grad::softmax(phoneme_scores(net, frames, train));
}

std::vector<Tensor> phoneme_parameters(PhonemeNet& net) {
  return {net.conv1_w, net.conv1_b, net.conv1_gamma, net.conv1_beta,
          net.conv2_w, net.conv2_b, net.conv2_gamma, net.conv2_beta,
          net.conv3_w, net.conv3_b, net.conv3_gamma, net.conv3_beta,
          net.fc1_w,   net.fc1_b,   net.fc2_w,       net.fc2_b};
}

std::vector<std::pair<std::string, Tensor>> phoneme_named_parameters(PhonemeNet& net) {
  return {{"conv1.weight", net.conv1_w}, {"conv1.bias", net.conv1_b},
          {"conv1.gamma", net.conv1_gamma}, {"conv1.beta", net.conv1_beta},
          {"conv2.weight", net.conv2_w}, {"conv2.bias", net.conv2_b},
          {"conv2.gamma", net.conv2_gamma}, {"conv2.beta", net.conv2_beta},
          {"conv3.weight", net.conv3_w}, {"conv3.bias", net.conv3_b},
          {"conv3.gamma", net.conv3_gamma}, {"conv3.beta", net.conv3_beta},
          {"fc1.weight", net.fc1_w}, {"fc1.bias", net.fc1_b},
          {"fc2.weight", net.fc2_w}, {"fc2.bias", net.fc2_b}};
}

std::vector<std::pair<std::string, std::vector<float>*>> phoneme_named_buffers(PhonemeNet& net) {
  return {{"conv1.running_mean", &net.conv1_bn.running_mean},
          {"conv1.running_var", &net.conv1_bn.running_var},
          {"conv2.running_mean", &net.conv2_bn.running_mean},
          {"conv2.running_var", &net.conv2_bn.running_var},
          {"conv3.running_mean", &net.conv3_bn.running_mean},
          {"conv3.running_var", &net.conv3_bn.running_var}};
}

}  // namespace models
}  // namespace srak
