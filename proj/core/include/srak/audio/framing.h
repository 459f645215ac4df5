// core/include/srak/audio/framing.h

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

#ifndef SRAK_AUDIO_FRAMING_H_
#define SRAK_AUDIO_FRAMING_H_

#include <cstdint>
#include <vector>

#include "srak/audio/wav.h"

namespace srak {
namespace audio {

// Overlapping fixed-size frames. Frame i covers source samples
// [i*hop, i*hop + frame_len). The trailing partial frame is dropped.
struct FrameSet {
  std::vector<float> frames;  // row-major [num_frames x frame_len]
  std::int64_t num_frames = 0;
  std::int64_t frame_len = 0;
  std::int64_t hop = 0;
  std::int64_t source_length = 0;

  const float* frame(std::int64_t i) const { return frames.data() + i * frame_len; }
};

inline std::int64_t frame_count(std::int64_t source_length, std::int64_t frame_len,
                                std::int64_t hop) {
  if (source_length < frame_len) return 0;
  return (source_length - frame_len) / hop + 1;
}

FrameSet frame_signal(const Waveform& w, std::int64_t frame_len, std::int64_t hop);

}  // namespace audio
}  // namespace srak

#endif  // SRAK_AUDIO_FRAMING_H_
