// core/include/srak/eval/metrics.h

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

#ifndef SRAK_EVAL_METRICS_H_
#define SRAK_EVAL_METRICS_H_

#include <cstdint>
#include <vector>

#include "srak/audio/wav.h"
#include "srak/models/attacker.h"

namespace srak {
namespace eval {

// 10*log10(mean(s^2) / mean(e^2)) with e = s - s_adv. Zero error is reported
// through the marker instead of a dB value. The paper's printed formula
// squares the power ratio (20*log10); literal_db carries that reading as a
// cross-check, standard db is what the report aggregates.
struct Snr {
  double db = 0.0;
  bool is_infinite = false;
  double literal_db() const { return 2.0 * db; }
};

Snr snr(const std::vector<float>& s, const std::vector<float>& s_adv);

// Frequency-weighted segmental SNR standing in for PESQ. 32 ms Hann windows,
// 16 ms hop, mel-spaced band energies weighted by the clean band energy, band
// and window values clamped to [-10, 35] dB, averaged over voiced windows.
inline constexpr double kProxyFloorDb = -10.0;
inline constexpr double kProxyCeilDb = 35.0;

double perceptual_proxy(const std::vector<float>& s, const std::vector<float>& s_adv);

// Deployed arbitrary-length inference: peak-normalize, run the attacker in
// eval mode, and add the denormalized residual back onto the raw signal.
// A zero residual therefore reproduces the input bit-exactly.
audio::Waveform attack_waveform(models::AttackerNet& net, const audio::Waveform& w);

// Mean perturbation energy per linear frequency band over a test set.
struct BandEnergy {
  int num_bands = 0;
  double band_hz = 0.0;  // width; band i covers [i*band_hz, (i+1)*band_hz)
  std::vector<double> energy;
  double band_low_hz(int i) const { return i * band_hz; }
  double band_high_hz(int i) const { return (i + 1) * band_hz; }
};

// Band energies of precomputed perturbations (sum of squared STFT magnitudes
// per band, averaged over signals).
BandEnergy band_energies(const std::vector<std::vector<float>>& deltas, int num_bands);

}  // namespace eval
}  // namespace srak

#endif  // SRAK_EVAL_METRICS_H_
