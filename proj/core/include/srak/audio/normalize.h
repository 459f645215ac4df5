// core/include/srak/audio/normalize.h

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

#ifndef SRAK_AUDIO_NORMALIZE_H_
#define SRAK_AUDIO_NORMALIZE_H_

#include <cmath>
#include <cstdint>
#include <vector>

#include "srak/common/error.h"

namespace srak {
namespace audio {

// Peak normalization. scale = max_i |x_i|; an all-zero frame keeps scale 0
// and passes through unchanged. The scale is treated as a constant during
// backprop so the same routine serves training and inference.
template <typename T>
T peak_scale(const T* x, std::int64_t n) {
  T s = 0;
  for (std::int64_t i = 0; i < n; i++) {
    T a = std::abs(x[i]);
    if (a > s) s = a;
  }
  return s;
}

template <typename T>
void peak_normalize(const T* x, std::int64_t n, T scale, T* out) {
  if (scale == 0) {
    for (std::int64_t i = 0; i < n; i++) out[i] = x[i];
    return;
  }
  for (std::int64_t i = 0; i < n; i++) out[i] = x[i] / scale;
}

template <typename T>
void peak_denormalize(const T* x, std::int64_t n, T scale, T* out) {
  if (scale == 0) {
    for (std::int64_t i = 0; i < n; i++) out[i] = x[i];
    return;
  }
  for (std::int64_t i = 0; i < n; i++) out[i] = x[i] * scale;
}

struct NormalizedFrame {
  std::vector<float> values;
  float scale = 0.0f;
};

inline NormalizedFrame normalize_frame(const float* x, std::int64_t n) {
  for (std::int64_t i = 0; i < n; i++) {
    if (!std::isfinite(x[i])) throw ValidationError("normalize_frame: non-finite sample");
  }
  NormalizedFrame f;
  f.scale = peak_scale(x, n);
  f.values.resize(static_cast<std::size_t>(n));
  peak_normalize(x, n, f.scale, f.values.data());
  return f;
}

inline std::vector<float> denormalize_frame(const NormalizedFrame& f) {
  std::vector<float> out(f.values.size());
  peak_denormalize(f.values.data(), static_cast<std::int64_t>(f.values.size()), f.scale,
                   out.data());
  return out;
}

}  // namespace audio
}  // namespace srak

#endif  // SRAK_AUDIO_NORMALIZE_H_
