// tests/test_models.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "srak/common/error.h"
#include "srak/common/rng.h"
#include "srak/grad/ops.h"
#include "srak/models/attacker.h"
#include "srak/models/init.h"
#include "srak/models/logits.h"
#include "srak/models/phoneme.h"
#include "srak/models/speaker.h"

using namespace srak;
using namespace srak::models;
using grad::Tensor;

namespace {

audio::Waveform random_wave(Rng& rng, std::size_t n) {
  audio::Waveform w;
  w.samples.resize(n);
  for (float& v : w.samples) v = static_cast<float>(rng.uniform(-0.5, 0.5));
  return w;
}

Tensor random_frames(Rng& rng, std::int64_t batch) {
  Tensor t = Tensor::zeros({batch, kFrameLen});
  for (float& v : t.data_vector()) v = static_cast<float>(rng.uniform(-0.5, 0.5));
  return t;
}

// Puts the attacker far away from identity so stitching and shift tests see a
// real perturbation path, and gives the batchnorm eval branch nontrivial
// running statistics.
void randomize_attacker(AttackerNet& net, Rng& rng) {
  for (AttackerBlock& b : net.blocks) {
    for (float& v : b.weight.data_vector()) v = static_cast<float>(0.3 * rng.normal());
    for (float& v : b.bias.data_vector()) v = static_cast<float>(0.1 * rng.normal());
    if (b.gamma.defined()) {
      for (float& v : b.gamma.data_vector()) v = static_cast<float>(rng.uniform(0.5, 1.5));
      for (float& v : b.beta.data_vector()) v = static_cast<float>(0.1 * rng.normal());
      for (float& v : b.bn_state.running_mean) v = static_cast<float>(0.1 * rng.normal());
      for (float& v : b.bn_state.running_var) v = static_cast<float>(rng.uniform(0.5, 2.0));
    }
  }
}

double kernel_dft_mag(const float* h, std::int64_t len, double freq_hz) {
  double re = 0.0, im = 0.0;
  for (std::int64_t i = 0; i < len; ++i) {
    const double ph = 2.0 * M_PI * freq_hz * static_cast<double>(i) / audio::kSampleRate;
    re += h[i] * std::cos(ph);
    im -= h[i] * std::sin(ph);
  }
  return std::sqrt(re * re + im * im);
}

}  // namespace

TEST_CASE("fresh attacker is the identity bit-exactly on 100 random lengths") {
  AttackerNet net = attacker_init(7);
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 10000));
    const audio::Waveform w = random_wave(rng, n);
    const audio::Waveform out = attacker_process(net, w);
    REQUIRE(out.samples.size() == n);
    CHECK(std::memcmp(out.samples.data(), w.samples.data(), n * sizeof(float)) == 0);
  }
}

TEST_CASE("fresh attacker is the identity in train mode too") {
  AttackerNet net = attacker_init(3);
  Rng rng(5);
  Tensor x = Tensor::zeros({2, 1, 500});
  for (float& v : x.data_vector()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  const Tensor y = attacker_forward(net, x, /*train=*/true);
  CHECK(std::memcmp(y.data(), x.data(), 1000 * sizeof(float)) == 0);
}

TEST_CASE("attacker preserves length 16000") {
  AttackerNet net = attacker_init(1);
  Rng rng(2);
  const audio::Waveform w = random_wave(rng, 16000);
  CHECK(attacker_process(net, w).samples.size() == 16000);
}

TEST_CASE("attacker rejects empty input") {
  AttackerNet net = attacker_init(1);
  audio::Waveform w;
  CHECK_THROWS_AS(attacker_process(net, w), ValidationError);
}

TEST_CASE("eval-mode stitching with 23-sample overlap matches the full pass") {
  AttackerNet net = attacker_init(9);
  Rng rng(17);
  randomize_attacker(net, rng);

  const std::size_t n = 4000, cut = 1700;
  const std::size_t ov = static_cast<std::size_t>(kAttackerReceptiveField);
  const audio::Waveform w = random_wave(rng, n);
  const audio::Waveform full = attacker_process(net, w);

  audio::Waveform a, b;
  a.samples.assign(w.samples.begin(), w.samples.begin() + static_cast<long>(cut + ov));
  b.samples.assign(w.samples.begin() + static_cast<long>(cut - ov), w.samples.end());
  const audio::Waveform ya = attacker_process(net, a);
  const audio::Waveform yb = attacker_process(net, b);

  // the attacker must actually perturb, otherwise this test is vacuous
  double moved = 0.0;
  for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(static_cast<double>(full.samples[i]) - w.samples[i]));
  CHECK(moved > 1e-3);

  for (std::size_t p = 0; p < cut; ++p)
    CHECK(std::abs(ya.samples[p] - full.samples[p]) <= 1e-6f);
  for (std::size_t p = cut; p < n; ++p)
    CHECK(std::abs(yb.samples[p - (cut - ov)] - full.samples[p]) <= 1e-6f);
}

TEST_CASE("eval-mode attacker is time-shift covariant away from boundaries") {
  AttackerNet net = attacker_init(13);
  Rng rng(23);
  randomize_attacker(net, rng);

  const std::size_t n = 2000, k = 37;
  const audio::Waveform w = random_wave(rng, n);
  audio::Waveform shifted;
  shifted.samples.assign(n, 0.0f);
  for (std::size_t i = 0; i + k < n; ++i) shifted.samples[i + k] = w.samples[i];

  const audio::Waveform y = attacker_process(net, w);
  const audio::Waveform ys = attacker_process(net, shifted);
  const std::size_t margin = static_cast<std::size_t>(kAttackerReceptiveField);
  for (std::size_t p = margin + k; p + margin + k < n; ++p)
    CHECK(ys.samples[p] == y.samples[p - k]);
}

TEST_CASE("attacker receptive field is 23 samples") {
  Rng rng(31);
  const std::size_t n = 600, pos = 300;
  const std::int64_t half = (kAttackerReceptiveField - 1) / 2;
  bool reached_edge = false;
  for (int trial = 0; trial < 5; ++trial) {
    AttackerNet net = attacker_init(100 + static_cast<std::uint64_t>(trial));
    randomize_attacker(net, rng);
    audio::Waveform w = random_wave(rng, n);
    const audio::Waveform y0 = attacker_process(net, w);
    w.samples[pos] += 0.25f;
    const audio::Waveform y1 = attacker_process(net, w);
    for (std::size_t p = 0; p < n; ++p) {
      const bool inside = static_cast<std::int64_t>(p) >= static_cast<std::int64_t>(pos) - half &&
                          static_cast<std::int64_t>(p) <= static_cast<std::int64_t>(pos) + half;
      if (!inside) CHECK(y1.samples[p] == y0.samples[p]);
    }
    if (y1.samples[pos - static_cast<std::size_t>(half)] != y0.samples[pos - static_cast<std::size_t>(half)] &&
        y1.samples[pos + static_cast<std::size_t>(half)] != y0.samples[pos + static_cast<std::size_t>(half)])
      reached_edge = true;
  }
  CHECK(reached_edge);
}

TEST_CASE("attacker exposes 18 trainable tensors") {
  AttackerNet net = attacker_init(7);
  CHECK(attacker_parameters(net).size() == 18);
  CHECK(attacker_named_parameters(net).size() == 18);
  CHECK(attacker_named_buffers(net).size() == 8);
}

TEST_CASE("speaker_forward shapes, determinism and frame-length guard") {
  SpeakerNet net = speaker_init(7, 20);
  Rng rng(3);
  Tensor frames = random_frames(rng, 3);
  // duplicate row 0 into row 2
  for (std::int64_t i = 0; i < kFrameLen; ++i)
    frames.data()[2 * kFrameLen + i] = frames.data()[i];

  const Tensor logits = speaker_forward(net, frames, /*train=*/false);
  REQUIRE(logits.rank() == 2);
  CHECK(logits.dim(0) == 3);
  CHECK(logits.dim(1) == 20);
  for (std::int64_t c = 0; c < 20; ++c)
    CHECK(logits.data()[0 * 20 + c] == logits.data()[2 * 20 + c]);

  Tensor bad = Tensor::zeros({1, 1600});
  CHECK_THROWS_AS(speaker_forward(net, bad, false), ValidationError);
}

TEST_CASE("speaker logits are differentiable w.r.t. input frames") {
  SpeakerNet net = speaker_init(5, 8);
  Rng rng(9);
  Tensor frames = random_frames(rng, 2);
  frames.set_requires_grad(true);
  const Tensor logits = speaker_forward(net, frames, false);
  grad::reduce_sum(logits).backward();
  double g = 0.0;
  for (std::int64_t i = 0; i < frames.numel(); ++i)
    g = std::max(g, std::abs(static_cast<double>(frames.grad()[i])));
  CHECK(g > 0.0);
}

TEST_CASE("frozen speaker parameters receive no gradient") {
  SpeakerNet net = speaker_init(5, 8);
  auto params = speaker_parameters(net);
  set_trainable(params, false);

  Rng rng(9);
  Tensor frames = random_frames(rng, 2);
  frames.set_requires_grad(true);
  const Tensor logits = speaker_forward(net, frames, false);
  grad::reduce_sum(logits).backward();

  for (auto& p : params) CHECK_FALSE(p.has_grad());
  double g = 0.0;
  for (std::int64_t i = 0; i < frames.numel(); ++i)
    g = std::max(g, std::abs(static_cast<double>(frames.grad()[i])));
  CHECK(g > 0.0);
}

TEST_CASE("sinc filter bank: band shape, narrow-band energy, symmetry") {
  // band [1 kHz, 2 kHz]: f1' = |f1| + 50, f2' = f1' + |bw| + 50
  Tensor f1 = Tensor::from_vector({1}, {950.0f});
  Tensor bw = Tensor::from_vector({1}, {950.0f});
  const Tensor k = grad::sinc_bandpass(f1, bw, kSincKernel, 16000.0f, 50.0f);
  REQUIRE(k.numel() == kSincKernel);

  const double in_band = kernel_dft_mag(k.data(), kSincKernel, 1500.0);
  const double out_band = kernel_dft_mag(k.data(), kSincKernel, 4000.0);
  CHECK(in_band > 10.0 * out_band);  // >= 20 dB

  for (std::int64_t i = 0; i < kSincKernel; ++i)
    CHECK(k.data()[i] == k.data()[kSincKernel - 1 - i]);

  Tensor bw0 = Tensor::from_vector({1}, {0.0f});
  const Tensor narrow = grad::sinc_bandpass(f1, bw0, kSincKernel, 16000.0f, 50.0f);
  double e_narrow = 0.0, e_wide = 0.0;
  for (std::int64_t i = 0; i < kSincKernel; ++i) {
    e_narrow += static_cast<double>(narrow.data()[i]) * narrow.data()[i];
    e_wide += static_cast<double>(k.data()[i]) * k.data()[i];
  }
  CHECK(e_narrow < 0.2 * e_wide);
}

TEST_CASE("phoneme posteriors are valid probabilities and deterministic") {
  PhonemeNet net = phoneme_init(7, 12);
  Rng rng(4);
  Tensor frames = random_frames(rng, 4);
  for (std::int64_t i = 0; i < kFrameLen; ++i)
    frames.data()[3 * kFrameLen + i] = frames.data()[i];

  const Tensor post = phoneme_forward(net, frames, false);
  REQUIRE(post.dim(0) == 4);
  REQUIRE(post.dim(1) == 12);
  for (std::int64_t r = 0; r < 4; ++r) {
    double s = 0.0;
    for (std::int64_t c = 0; c < 12; ++c) {
      CHECK(post.data()[r * 12 + c] >= 0.0f);
      s += post.data()[r * 12 + c];
    }
    CHECK(std::abs(s - 1.0) < 1e-6);
  }
  for (std::int64_t c = 0; c < 12; ++c) CHECK(post.data()[0 * 12 + c] == post.data()[3 * 12 + c]);

  Tensor bad = Tensor::zeros({1, 100});
  CHECK_THROWS_AS(phoneme_forward(net, bad, false), ValidationError);
}

TEST_CASE("untrained phoneme posteriors are near uniform over 100 frames") {
  PhonemeNet net = phoneme_init(2026, 12);
  Rng rng(8);
  const Tensor frames = random_frames(rng, 100);
  const Tensor post = phoneme_forward(net, frames, false);
  float worst = 0.0f;
  for (std::int64_t i = 0; i < post.numel(); ++i) worst = std::max(worst, post.data()[i]);
  CHECK(worst < 2.0f / 12.0f);
}

TEST_CASE("extract_logits orders the top two with ties to the lowest index") {
  const Tensor t = Tensor::from_vector({3, 3}, {1.0f, 3.0f, 3.0f,
                                                5.0f, 5.0f, 1.0f,
                                                0.1f, 0.2f, 0.3f});
  const auto ls = extract_logits(t);
  CHECK(ls[0].first == 1);
  CHECK(ls[0].second == 2);
  CHECK(ls[1].first == 0);
  CHECK(ls[1].second == 1);
  CHECK(ls[2].first == 2);
  CHECK(ls[2].second == 1);
  CHECK(ls[2].values[0] == 0.1f);
}

TEST_CASE("sentence_decision: single frame, agreement, order invariance") {
  Logits a{{0.0f, 4.0f, 1.0f}, 1, 2};
  CHECK(sentence_decision({a}) == 1);

  Logits b{{0.5f, 5.0f, 0.0f}, 1, 0};
  Logits c{{-1.0f, 3.0f, 2.0f}, 1, 2};
  CHECK(sentence_decision({a, b, c}) == 1);
  CHECK(sentence_decision({c, a, b}) == 1);
  CHECK(sentence_decision({b, c, a}) == 1);

  CHECK_THROWS_AS(sentence_decision({}), ValidationError);
}

TEST_CASE("adding a constant to logits changes neither index") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    std::vector<float> row(8);
    for (float& v : row) v = static_cast<float>(rng.uniform(-3.0, 3.0));
    const Tensor base = Tensor::from_vector({1, 8}, row);
    std::vector<float> plus(row);
    for (float& v : plus) v += 2.5f;
    const Tensor shifted = Tensor::from_vector({1, 8}, plus);
    const auto l0 = extract_logits(base);
    const auto l1 = extract_logits(shifted);
    CHECK(l0[0].first == l1[0].first);
    CHECK(l0[0].second == l1[0].second);
  }
}
