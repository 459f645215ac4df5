// core/include/srak/corpus/synthesis.h

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

#ifndef SRAK_CORPUS_SYNTHESIS_H_
#define SRAK_CORPUS_SYNTHESIS_H_

#include <cstdint>
#include <vector>

#include "srak/audio/wav.h"
#include "srak/corpus/phonemes.h"
#include "srak/corpus/profile.h"

namespace srak {
namespace corpus {

enum class Split { kTrain, kTest };

struct Segment {
  int phoneme = 0;       // index into phoneme_inventory()
  int duration_ms = 0;   // [60, 200]
};

struct Utterance {
  audio::Waveform waveform;
  int speaker_id = -1;
  std::vector<int> phoneme_labels;  // one per sample
  Split split = Split::kTrain;
};

// Source-filter synthesis. Voiced segments run a spectrally tilted pulse
// train (plus breathiness noise) through the speaker's resonators and then
// add an explicit tone at the fundamental; unvoiced segments run white noise
// through widened resonators. Each segment gets 5 ms fade ramps, the whole
// utterance is peak normalized to 0.5. Deterministic in (profile, seq, seed).
// Throws ValidationError for an empty seq, out-of-range durations, or a bad
// phoneme index.
Utterance synthesize_utterance(const SpeakerProfile& profile,
                               const std::vector<Segment>& seq,
                               std::uint64_t seed);

}  // namespace corpus
}  // namespace srak

#endif  // SRAK_CORPUS_SYNTHESIS_H_
