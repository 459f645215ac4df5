// core/src/eval/stft.cc

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

#include "srak/eval/stft.h"

#include <cmath>

#include "srak/common/error.h"

namespace srak {
namespace eval {

void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ValidationError("fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<double> hann_window(int n) {
  if (n <= 1) throw ValidationError("window too short");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<std::size_t>(i)] =
        0.5 - 0.5 * std::cos(2.0 * M_PI * i / static_cast<double>(n - 1));
  return w;
}

Spectrogram stft_magnitude(const float* x, std::int64_t n, int win, int hop) {
  if (win <= 1 || (win & (win - 1)) != 0)
    throw ValidationError("stft window must be a power of two");
  if (hop <= 0) throw ValidationError("stft hop must be positive");
  if (n < win) throw ValidationError("signal shorter than one stft window");
  const std::vector<double> w = hann_window(win);
  Spectrogram out;
  out.frames = (n - win) / hop + 1;
  out.bins = win / 2 + 1;
  out.mag.resize(static_cast<std::size_t>(out.frames * out.bins));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(win));
  for (std::int64_t f = 0; f < out.frames; ++f) {
    const float* seg = x + f * hop;
    for (int i = 0; i < win; ++i)
      buf[static_cast<std::size_t>(i)] = {static_cast<double>(seg[i]) * w[static_cast<std::size_t>(i)], 0.0};
    fft_inplace(buf);
    for (std::int64_t b = 0; b < out.bins; ++b)
      out.mag[static_cast<std::size_t>(f * out.bins + b)] = std::abs(buf[static_cast<std::size_t>(b)]);
  }
  return out;
}

}  // namespace eval
}  // namespace srak
