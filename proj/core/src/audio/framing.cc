// core/src/audio/framing.cc

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

#include "srak/audio/framing.h"

#include <cstring>

#include "srak/common/error.h"

namespace srak {
namespace audio {

FrameSet frame_signal(const Waveform& w, std::int64_t frame_len, std::int64_t hop) {
  if (frame_len <= 0 || hop <= 0) {
    throw ValidationError("frame_signal: frame_len and hop must be positive");
  }
  FrameSet out;
  out.frame_len = frame_len;
  out.hop = hop;
  out.source_length = static_cast<std::int64_t>(w.samples.size());
  out.num_frames = frame_count(out.source_length, frame_len, hop);
  out.frames.resize(static_cast<std::size_t>(out.num_frames * frame_len));
  for (std::int64_t i = 0; i < out.num_frames; i++) {
    std::memcpy(out.frames.data() + i * frame_len, w.samples.data() + i * hop,
                sizeof(float) * static_cast<std::size_t>(frame_len));
  }
  return out;
}

}  // namespace audio
}  // namespace srak
