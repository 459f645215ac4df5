// core/src/eval/metrics.cc

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

#include "srak/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include "srak/audio/normalize.h"
#include "srak/common/error.h"
#include "srak/eval/stft.h"
#include "srak/grad/tensor.h"

namespace srak {
namespace eval {

namespace {

double mel_of(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double hz_of(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

constexpr int kProxyBands = 16;
constexpr double kProxyLowHz = 50.0;

// Mel-spaced band edges over [kProxyLowHz, Nyquist].
std::vector<double> proxy_band_edges() {
  std::vector<double> edges(kProxyBands + 1);
  const double lo = mel_of(kProxyLowHz);
  const double hi = mel_of(audio::kSampleRate / 2.0);
  for (int i = 0; i <= kProxyBands; ++i)
    edges[static_cast<std::size_t>(i)] = hz_of(lo + (hi - lo) * i / kProxyBands);
  return edges;
}

}  // namespace

Snr snr(const std::vector<float>& s, const std::vector<float>& s_adv) {
  if (s.size() != s_adv.size()) throw ValidationError("snr: length mismatch");
  if (s.empty()) throw ValidationError("snr: empty signal");
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double sv = s[i];
    const double ev = static_cast<double>(s[i]) - static_cast<double>(s_adv[i]);
    sig += sv * sv;
    err += ev * ev;
  }
  sig /= static_cast<double>(s.size());
  err /= static_cast<double>(s.size());
  if (sig == 0.0) throw ValidationError("snr: zero signal");
  Snr out;
  if (err == 0.0) {
    out.is_infinite = true;
    return out;
  }
  out.db = 10.0 * std::log10(sig / err);
  return out;
}

double perceptual_proxy(const std::vector<float>& s, const std::vector<float>& s_adv) {
  if (s.size() != s_adv.size()) throw ValidationError("perceptual_proxy: length mismatch");
  const std::int64_t n = static_cast<std::int64_t>(s.size());
  if (n < kStftWindow) throw ValidationError("perceptual_proxy: input shorter than one window");

  std::vector<float> e(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) e[i] = s[i] - s_adv[i];
  const Spectrogram cs = stft_magnitude(s.data(), n, kStftWindow, kStftHop);
  const Spectrogram es = stft_magnitude(e.data(), n, kStftWindow, kStftHop);

  const std::vector<double> edges = proxy_band_edges();
  // bin -> band, -1 outside the banded range
  std::vector<int> band_of(static_cast<std::size_t>(cs.bins), -1);
  for (std::int64_t b = 0; b < cs.bins; ++b) {
    const double hz = static_cast<double>(b) * audio::kSampleRate / kStftWindow;
    for (int k = 0; k < kProxyBands; ++k)
      if (hz >= edges[static_cast<std::size_t>(k)] && hz < edges[static_cast<std::size_t>(k + 1)])
        band_of[static_cast<std::size_t>(b)] = k;
    if (hz == edges[kProxyBands]) band_of[static_cast<std::size_t>(b)] = kProxyBands - 1;
  }

  double total = 0.0;
  std::int64_t windows = 0;
  std::vector<double> clean_e(kProxyBands), noise_e(kProxyBands);
  for (std::int64_t f = 0; f < cs.frames; ++f) {
    std::fill(clean_e.begin(), clean_e.end(), 0.0);
    std::fill(noise_e.begin(), noise_e.end(), 0.0);
    for (std::int64_t b = 0; b < cs.bins; ++b) {
      const int k = band_of[static_cast<std::size_t>(b)];
      if (k < 0) continue;
      clean_e[static_cast<std::size_t>(k)] += cs.at(f, b) * cs.at(f, b);
      noise_e[static_cast<std::size_t>(k)] += es.at(f, b) * es.at(f, b);
    }
    double weight_sum = 0.0, weighted = 0.0, noise_sum = 0.0;
    bool any_band = false;
    for (int k = 0; k < kProxyBands; ++k) {
      const double ce = clean_e[static_cast<std::size_t>(k)];
      if (ce <= 0.0) continue;
      any_band = true;
      const double ne = noise_e[static_cast<std::size_t>(k)];
      noise_sum += ne;
      double band_db = ne > 0.0 ? 10.0 * std::log10(ce / ne) : kProxyCeilDb;
      band_db = std::clamp(band_db, kProxyFloorDb, kProxyCeilDb);
      // Compressed energy weighting keeps one dominant band from hiding
      // broadband distortion in the remaining bands.
      const double w = std::pow(ce, 0.2);
      weighted += w * band_db;
      weight_sum += w;
    }
    if (!any_band) continue;  // silent window carries no information
    if (noise_sum == 0.0) {
      total += kProxyCeilDb;
    } else {
      total += std::clamp(weighted / weight_sum, kProxyFloorDb, kProxyCeilDb);
    }
    ++windows;
  }
  if (windows == 0) return kProxyCeilDb;
  return total / static_cast<double>(windows);
}

audio::Waveform attack_waveform(models::AttackerNet& net, const audio::Waveform& w) {
  if (w.samples.empty()) throw ValidationError("attack_waveform: empty waveform");
  const std::int64_t n = static_cast<std::int64_t>(w.samples.size());
  float p = audio::peak_scale(w.samples.data(), n);
  if (p == 0.0f) p = 1.0f;
  std::vector<float> norm(w.samples.size());
  audio::peak_normalize(w.samples.data(), n, p, norm.data());
  grad::Tensor x = grad::Tensor::from_vector({1, 1, n}, norm);
  const grad::Tensor y = models::attacker_forward(net, x, /*train=*/false);
  const auto& out = y.data_vector();
  audio::Waveform adv;
  adv.sample_rate = w.sample_rate;
  adv.samples.resize(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    adv.samples[i] = w.samples[i] + p * (out[i] - norm[i]);
  return adv;
}

BandEnergy band_energies(const std::vector<std::vector<float>>& deltas, int num_bands) {
  if (deltas.empty()) throw ValidationError("band_energies: empty set");
  if (num_bands <= 0) throw ValidationError("band_energies: need at least one band");
  BandEnergy out;
  out.num_bands = num_bands;
  out.band_hz = (audio::kSampleRate / 2.0) / num_bands;
  out.energy.assign(static_cast<std::size_t>(num_bands), 0.0);
  for (const auto& d : deltas) {
    const Spectrogram sp =
        stft_magnitude(d.data(), static_cast<std::int64_t>(d.size()), kStftWindow, kStftHop);
    for (std::int64_t f = 0; f < sp.frames; ++f) {
      for (std::int64_t b = 0; b < sp.bins; ++b) {
        const double hz = static_cast<double>(b) * audio::kSampleRate / kStftWindow;
        int k = static_cast<int>(hz / out.band_hz);
        if (k >= num_bands) k = num_bands - 1;
        out.energy[static_cast<std::size_t>(k)] += sp.at(f, b) * sp.at(f, b);
      }
    }
  }
  for (auto& v : out.energy) v /= static_cast<double>(deltas.size());
  return out;
}

}  // namespace eval
}  // namespace srak
