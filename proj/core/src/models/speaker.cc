// core/src/models/speaker.cc

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

#include "srak/models/speaker.h"

#include <cmath>

#include "srak/audio/wav.h"
#include "srak/common/error.h"
#include "srak/models/init.h"

namespace srak {
namespace models {

using grad::Tensor;

namespace {

constexpr std::int64_t kConvCh = 60;
constexpr std::int64_t kConvKernel = 5;
constexpr std::int64_t kHidden = 128;
constexpr float kLeak = 0.2f;

double mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_inv(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

SpeakerNet speaker_init(std::uint64_t seed, int num_speakers) {
  if (num_speakers < 2) throw ValidationError("speaker_init: need at least 2 classes");
  Rng rng(mix_seed(seed, 0x5B3AULL));

  SpeakerNet net;
  net.num_speakers = num_speakers;

  // mel-spaced initial bands covering 30 Hz .. 7.7 kHz
  std::vector<float> f1(static_cast<std::size_t>(kSincFilters));
  std::vector<float> bw(static_cast<std::size_t>(kSincFilters));
  const double m_lo = mel(30.0), m_hi = mel(7700.0);
  for (std::int64_t k = 0; k < kSincFilters; ++k) {
    const double e0 = mel_inv(m_lo + (m_hi - m_lo) * static_cast<double>(k) / kSincFilters);
    const double e1 = mel_inv(m_lo + (m_hi - m_lo) * static_cast<double>(k + 1) / kSincFilters);
    f1[static_cast<std::size_t>(k)] = static_cast<float>(e0);
    bw[static_cast<std::size_t>(k)] = static_cast<float>(e1 - e0);
  }
  net.f1_hz = Tensor::from_vector({kSincFilters}, std::move(f1), /*requires_grad=*/true);
  net.bw_hz = Tensor::from_vector({kSincFilters}, std::move(bw), /*requires_grad=*/true);
  net.sinc_bias = zeros_param({kSincFilters});
  net.sinc_gamma = ones_param({kSincFilters});
  net.sinc_beta = zeros_param({kSincFilters});
  net.sinc_bn = grad::BatchNormState(kSincFilters);

  net.conv1_w = conv_init(rng, kConvCh, kSincFilters, kConvKernel);
  net.conv1_b = zeros_param({kConvCh});
  net.conv1_gamma = ones_param({kConvCh});
  net.conv1_beta = zeros_param({kConvCh});
  net.conv1_bn = grad::BatchNormState(kConvCh);

  net.conv2_w = conv_init(rng, kConvCh, kConvCh, kConvKernel);
  net.conv2_b = zeros_param({kConvCh});
  net.conv2_gamma = ones_param({kConvCh});
  net.conv2_beta = zeros_param({kConvCh});
  net.conv2_bn = grad::BatchNormState(kConvCh);

  net.fc1_w = affine_init(rng, kHidden, kConvCh * 10);
  net.fc1_b = zeros_param({kHidden});
  // small head keeps the untrained class distribution near uniform
  net.fc2_w = normal_init(rng, {num_speakers, kHidden}, 0.01);
  net.fc2_b = zeros_param({num_speakers});
  return net;
}

grad::Tensor speaker_forward(SpeakerNet& net, const grad::Tensor& frames, bool train) {
  if (frames.rank() != 2 || frames.dim(1) != kFrameLen)
    throw ValidationError("speaker_forward: expected frames [batch, 3200]");
  const std::int64_t b = frames.dim(0);

  Tensor h = grad::reshape(frames, {b, 1, kFrameLen});
  const Tensor kernel = grad::sinc_bandpass(net.f1_hz, net.bw_hz, kSincKernel,
                                            static_cast<float>(audio::kSampleRate), kSincMinHz);
  h = grad::conv1d(h, kernel, net.sinc_bias, /*dilation=*/1, /*padding=*/(kSincKernel - 1) / 2,
                   /*stride=*/kSincStride);          // [b, 80, 80]
  h = grad::absolute(h);
  h = grad::batchnorm1d(h, net.sinc_gamma, net.sinc_beta, &net.sinc_bn, train);
  h = grad::leaky_relu(h, kLeak);
  h = grad::maxpool1d(h, 2);                         // [b, 80, 40]

  h = grad::conv1d(h, net.conv1_w, net.conv1_b, 1, (kConvKernel - 1) / 2);
  h = grad::batchnorm1d(h, net.conv1_gamma, net.conv1_beta, &net.conv1_bn, train);
  h = grad::leaky_relu(h, kLeak);
  h = grad::maxpool1d(h, 2);                         // [b, 60, 20]

  h = grad::conv1d(h, net.conv2_w, net.conv2_b, 1, (kConvKernel - 1) / 2);
  h = grad::batchnorm1d(h, net.conv2_gamma, net.conv2_beta, &net.conv2_bn, train);
  h = grad::leaky_relu(h, kLeak);
  h = grad::maxpool1d(h, 2);                         // [b, 60, 10]

  h = grad::reshape(h, {b, kConvCh * 10});
  h = grad::affine(h, net.fc1_w, net.fc1_b);
  h = grad::leaky_relu(h, kLeak);
  return grad::affine(h, net.fc2_w, net.fc2_b);
}

std::vector<Tensor> speaker_parameters(SpeakerNet& net) {
  return {net.f1_hz,   net.bw_hz,   net.sinc_bias, net.sinc_gamma, net.sinc_beta,
          net.conv1_w, net.conv1_b, net.conv1_gamma, net.conv1_beta,
          net.conv2_w, net.conv2_b, net.conv2_gamma, net.conv2_beta,
          net.fc1_w,   net.fc1_b,   net.fc2_w,     net.fc2_b};
}

std::vector<std::pair<std::string, Tensor>> speaker_named_parameters(SpeakerNet& net) {
  return {{"sinc.f1_hz", net.f1_hz},
          {"sinc.bw_hz", net.bw_hz},
          {"sinc.bias", net.sinc_bias},
          {"sinc.gamma", net.sinc_gamma},
          {"sinc.beta", net.sinc_beta},
          {"conv1.weight", net.conv1_w},
          {"conv1.bias", net.conv1_b},
          {"conv1.gamma", net.conv1_gamma},
          {"conv1.beta", net.conv1_beta},
          {"conv2.weight", net.conv2_w},
          {"conv2.bias", net.conv2_b},
          {"conv2.gamma", net.conv2_gamma},
          {"conv2.beta", net.conv2_beta},
          {"fc1.weight", net.fc1_w},
          {"fc1.bias", net.fc1_b},
          {"fc2.weight", net.fc2_w},
          {"fc2.bias", net.fc2_b}};
}

std::vector<std::pair<std::string, std::vector<float>*>> speaker_named_buffers(SpeakerNet& net) {
  return {{"sinc.running_mean", &net.sinc_bn.running_mean},
          {"sinc.running_var", &net.sinc_bn.running_var},
          {"conv1.running_mean", &net.conv1_bn.running_mean},
          {"conv1.running_var", &net.conv1_bn.running_var},
          {"conv2.running_mean", &net.conv2_bn.running_mean},
          {"conv2.running_var", &net.conv2_bn.running_var}};
}

}  // namespace models
}  // namespace srak
