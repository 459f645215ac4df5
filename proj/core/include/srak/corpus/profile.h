// core/include/srak/corpus/profile.h

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

#ifndef SRAK_CORPUS_PROFILE_H_
#define SRAK_CORPUS_PROFILE_H_

#include <cstdint>
#include <vector>

namespace srak {
namespace corpus {

struct FormantSpec {
  float center_hz;
  float bandwidth_hz;
};

// Voice parameters for one synthetic speaker. Centers are strictly
// increasing and below Nyquist; pitch stays inside [80, 300] Hz.
struct SpeakerProfile {
  int speaker_id = -1;
  float pitch_hz = 0.0f;
  std::vector<FormantSpec> formants;  // 4 entries
  float breathiness = 0.0f;           // noise fraction mixed into voiced source
};

// Pure function of (seed, speaker_id). Formants are drawn from disjoint
// per-slot ranges, so the increasing-centers invariant holds by construction.
SpeakerProfile generate_profile(std::uint64_t seed, int speaker_id);

}  // namespace corpus
}  // namespace srak

#endif  // SRAK_CORPUS_PROFILE_H_
