// core/src/corpus/profile.cc

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

#include "srak/corpus/profile.h"

#include "srak/common/error.h"
#include "srak/common/rng.h"

namespace srak {
namespace corpus {

namespace {
// Disjoint center ranges per formant slot. Worst-case phoneme offsets keep
// shifted centers inside (150, 7600) Hz at 16 kHz.
constexpr double kCenterLo[4] = {300.0, 950.0, 2300.0, 3300.0};
constexpr double kCenterHi[4] = {850.0, 2100.0, 3100.0, 4400.0};
}  // namespace

SpeakerProfile generate_profile(std::uint64_t seed, int speaker_id) {
  if (speaker_id < 0) throw ValidationError("generate_profile: negative speaker_id");
  Rng rng(mix_seed(mix_seed(seed, 0xA11CEULL), static_cast<std::uint64_t>(speaker_id)));

  SpeakerProfile p;
  p.speaker_id = speaker_id;
  p.pitch_hz = static_cast<float>(rng.uniform(90.0, 280.0));
  p.formants.resize(4);
  for (int i = 0; i < 4; ++i) {
    p.formants[i].center_hz = static_cast<float>(rng.uniform(kCenterLo[i], kCenterHi[i]));
    p.formants[i].bandwidth_hz = static_cast<float>(rng.uniform(60.0, 200.0));
  }
  p.breathiness = static_cast<float>(rng.uniform(0.0, 0.3));
  return p;
}

}  // namespace corpus
}  // namespace srak
