// benchmarks/bench_models.cc

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

#include <benchmark/benchmark.h>

#include "srak/audio/wav.h"
#include "srak/common/rng.h"
#include "srak/eval/metrics.h"
#include "srak/grad/tensor.h"
#include "srak/models/attacker.h"
#include "srak/models/speaker.h"

using namespace srak;

namespace {

audio::Waveform random_audio(std::int64_t samples) {
  Rng rng(6);
  audio::Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(static_cast<std::size_t>(samples));
  for (auto& v : w.samples) v = static_cast<float>(rng.uniform(-0.5, 0.5));
  return w;
}

// The deployment path RTF measures: peak scaling plus one eval-mode forward
// over the whole signal. range(0) is seconds of 16 kHz audio.
void BM_AttackWaveform(benchmark::State& state) {
  models::AttackerNet net = models::attacker_init(1);
  const audio::Waveform w = random_audio(state.range(0) * 16000);
  for (auto _ : state) {
    audio::Waveform adv = eval::attack_waveform(net, w);
    benchmark::DoNotOptimize(adv.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 16000);
}

// One 200 ms frame through the classifier, the unit of sentence voting.
void BM_SpeakerFrameForward(benchmark::State& state) {
  models::SpeakerNet net = models::speaker_init(2, 20);
  Rng rng(7);
  const std::int64_t batch = state.range(0);
  std::vector<float> v(static_cast<std::size_t>(batch * models::kFrameLen));
  for (auto& x : v) x = static_cast<float>(rng.uniform(-0.5, 0.5));
  grad::Tensor frames = grad::Tensor::from_vector({batch, models::kFrameLen}, v, false);
  for (auto _ : state) {
    grad::Tensor logits = models::speaker_forward(net, frames, false);
    benchmark::DoNotOptimize(logits.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

}  // namespace

BENCHMARK(BM_AttackWaveform)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpeakerFrameForward)->Arg(1)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
