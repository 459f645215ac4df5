// core/include/srak/audio/wav.h

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

#ifndef SRAK_AUDIO_WAV_H_
#define SRAK_AUDIO_WAV_H_

#include <cstdint>
#include <string>
#include <vector>

namespace srak {
namespace audio {

inline constexpr int kSampleRate = 16000;

// Mono sample sequence in [-1, 1]. Values are clamped on write, not on load;
// adversarial addition may push samples out of range transiently.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kSampleRate;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file: mono, PCM 16-bit or IEEE float 32-bit. Integer
// samples are mapped to [-1, 1] by division by 32768. Unknown chunks are
// skipped. If expected_rate > 0 a mismatching sample rate is an error.
Waveform load_wav(const std::string& path, int expected_rate = 0);

// Writes mono RIFF/WAVE: "fmt " (format 1 for pcm16, 3 for float32) followed
// by "data". Samples are clamped to [-1, 1] before encoding.
void save_wav(const Waveform& w, const std::string& path,
              WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace audio
}  // namespace srak

#endif  // SRAK_AUDIO_WAV_H_
