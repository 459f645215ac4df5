// core/include/srak/eval/stft.h

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

#ifndef SRAK_EVAL_STFT_H_
#define SRAK_EVAL_STFT_H_

#include <complex>
#include <cstdint>
#include <vector>

namespace srak {
namespace eval {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a);

std::vector<double> hann_window(int n);

// Hann-windowed magnitude STFT. Returns row-major [frames x (win/2 + 1)]
// magnitudes; win must be a power of two, trailing partial windows dropped.
struct Spectrogram {
  std::int64_t frames = 0;
  std::int64_t bins = 0;
  std::vector<double> mag;
  double at(std::int64_t f, std::int64_t b) const { return mag[f * bins + b]; }
};

Spectrogram stft_magnitude(const float* x, std::int64_t n, int win, int hop);

inline constexpr int kStftWindow = 512;  // 32 ms at 16 kHz
inline constexpr int kStftHop = 256;     // 16 ms

}  // namespace eval
}  // namespace srak

#endif  // SRAK_EVAL_STFT_H_
