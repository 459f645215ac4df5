// tests/test_eval.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <sstream>
#include <vector>

#include "srak/common/error.h"
#include "srak/common/rng.h"
#include "srak/corpus/profile.h"
#include "srak/corpus/synthesis.h"
#include "srak/eval/metrics.h"
#include "srak/eval/report.h"
#include "srak/eval/stft.h"
#include "srak/models/attacker.h"
#include "srak/models/speaker.h"

using namespace srak;
using namespace srak::eval;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * static_cast<double>(k * t) / static_cast<double>(n);
      acc += a[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

corpus::Utterance voiced_utterance(int speaker, std::uint64_t seed) {
  const corpus::SpeakerProfile prof = corpus::generate_profile(1234, speaker);
  std::vector<corpus::Segment> seq;
  for (int i = 0; i < 8; ++i) seq.push_back({i % 9, 150});  // voiced templates only
  return corpus::synthesize_utterance(prof, seq, seed);
}

std::vector<corpus::Utterance> small_testset() {
  std::vector<corpus::Utterance> set;
  for (int s = 0; s < 3; ++s) {
    for (int u = 0; u < 2; ++u) {
      corpus::Utterance utt = voiced_utterance(s, 900 + 10 * s + u);
      utt.speaker_id = s;
      set.push_back(std::move(utt));
    }
  }
  return set;
}

models::AttackerNet noisy_attacker(std::uint64_t seed) {
  models::AttackerNet net = models::attacker_init(seed);
  Rng rng(mix_seed(seed, 77));
  auto& out_block = net.blocks.back();
  for (auto& v : out_block.weight.data_vector()) v = static_cast<float>(2e-3 * rng.normal());
  for (auto& v : out_block.bias.data_vector()) v = static_cast<float>(1e-4 * rng.normal());
  return net;
}

}  // namespace

TEST_CASE("fft matches a naive dft on random inputs") {
  Rng rng(31);
  for (std::size_t n : {2u, 4u, 8u, 32u, 128u, 512u}) {
    std::vector<std::complex<double>> a(n);
    for (auto& v : a) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    std::vector<std::complex<double>> fast = a;
    fft_inplace(fast);
    const auto slow = naive_dft(a);
    double scale = 0.0;
    for (const auto& v : slow) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(fast[k] - slow[k]) <= 1e-10 * std::max(1.0, scale));
  }
  std::vector<std::complex<double>> bad(3);
  CHECK_THROWS_AS(fft_inplace(bad), ValidationError);
  std::vector<std::complex<double>> empty;
  CHECK_THROWS_AS(fft_inplace(empty), ValidationError);
}

TEST_CASE("hann window is symmetric with zero endpoints") {
  const auto w = hann_window(512);
  CHECK(w[0] == 0.0);
  CHECK(std::abs(w[511]) < 1e-12);
  for (int i = 0; i < 512; ++i) CHECK(w[static_cast<std::size_t>(i)] == doctest::Approx(w[static_cast<std::size_t>(511 - i)]).epsilon(1e-12));
  double peak = *std::max_element(w.begin(), w.end());
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("stft frame geometry and tone localization") {
  Rng rng(7);
  std::vector<float> x(4000);
  for (auto& v : x) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  const Spectrogram sp = stft_magnitude(x.data(), 4000, 512, 256);
  CHECK(sp.frames == (4000 - 512) / 256 + 1);
  CHECK(sp.bins == 257);

  // 1 kHz tone lands on bin 32 = 1000/31.25.
  std::vector<float> tone(4096);
  for (std::size_t i = 0; i < tone.size(); ++i)
    tone[i] = static_cast<float>(std::sin(2.0 * M_PI * 1000.0 * static_cast<double>(i) / 16000.0));
  const Spectrogram ts = stft_magnitude(tone.data(), 4096, 512, 256);
  for (std::int64_t f = 0; f < ts.frames; ++f) {
    std::int64_t best = 0;
    for (std::int64_t b = 1; b < ts.bins; ++b)
      if (ts.at(f, b) > ts.at(f, best)) best = b;
    CHECK(best == 32);
  }
  CHECK_THROWS_AS(stft_magnitude(x.data(), 100, 512, 256), ValidationError);
  CHECK_THROWS_AS(stft_magnitude(x.data(), 4000, 500, 256), ValidationError);
}

TEST_CASE("snr worked examples") {
  Rng rng(11);
  std::vector<float> s(5000);
  for (auto& v : s) v = static_cast<float>(rng.uniform(-0.5, 0.5));

  std::vector<float> adv(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) adv[i] = s[i] - s[i] * 1e-3f;
  Snr r = snr(s, adv);
  CHECK_FALSE(r.is_infinite);
  CHECK(r.db == doctest::Approx(60.0).epsilon(1e-3));
  CHECK(r.literal_db() == doctest::Approx(120.0).epsilon(1e-3));

  Snr same = snr(s, s);
  CHECK(same.is_infinite);

  std::vector<float> zero(s.size(), 0.0f);
  Snr unity = snr(s, zero);  // error equals the signal
  CHECK(unity.db == doctest::Approx(0.0).epsilon(1e-9));

  std::vector<float> plus(s.size()), minus(s.size());
  std::vector<float> e(s.size());
  for (auto& v : e) v = static_cast<float>(rng.uniform(-0.01, 0.01));
  for (std::size_t i = 0; i < s.size(); ++i) {
    plus[i] = s[i] + e[i];
    minus[i] = s[i] - e[i];
  }
  CHECK(snr(s, plus).db == doctest::Approx(snr(s, minus).db).epsilon(1e-6));

  std::vector<float> shorter(100, 0.1f);
  CHECK_THROWS_AS(snr(s, shorter), ValidationError);
  CHECK_THROWS_AS(snr(zero, s), ValidationError);
}

TEST_CASE("perceptual proxy clamps, floors, and orders noise levels") {
  const corpus::Utterance utt = voiced_utterance(0, 4242);
  const auto& s = utt.waveform.samples;
  REQUIRE(s.size() >= 512);

  CHECK(perceptual_proxy(s, s) == 35.0);

  double sig_power = 0.0;
  for (float v : s) sig_power += static_cast<double>(v) * v;
  sig_power /= static_cast<double>(s.size());

  Rng rng(5);
  std::vector<double> noise(s.size());
  double noise_power = 0.0;
  for (auto& v : noise) {
    v = rng.uniform(-1.0, 1.0);
    noise_power += v * v;
  }
  noise_power /= static_cast<double>(noise.size());
  const double to_unit = std::sqrt(sig_power / noise_power);

  auto with_noise = [&](double scale) {
    std::vector<float> adv(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      adv[i] = s[i] - static_cast<float>(noise[i] * to_unit * scale);
    return adv;
  };

  // 0 dB white noise.
  CHECK(perceptual_proxy(s, with_noise(1.0)) < 5.0);

  double prev = 1e9;
  for (double scale : {0.125, 0.25, 0.5, 1.0, 2.0}) {
    const double score = perceptual_proxy(s, with_noise(scale));
    CHECK(score <= prev + 1e-12);
    prev = score;
  }

  std::vector<float> tiny(100, 0.1f);
  CHECK_THROWS_AS(perceptual_proxy(tiny, tiny), ValidationError);
  std::vector<float> wrong(s.size() - 1);
  CHECK_THROWS_AS(perceptual_proxy(s, wrong), ValidationError);
}

TEST_CASE("band energies localize tones and stay flat for white noise") {
  std::vector<float> tone(16000);
  for (std::size_t i = 0; i < tone.size(); ++i)
    tone[i] = static_cast<float>(
        0.1 * std::sin(2.0 * M_PI * 7500.0 * static_cast<double>(i) / 16000.0));
  BandEnergy tb = band_energies({tone}, 8);
  REQUIRE(tb.num_bands == 8);
  CHECK(tb.band_low_hz(0) == 0.0);
  CHECK(tb.band_high_hz(7) == 8000.0);
  double total = 0.0;
  for (double v : tb.energy) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(tb.energy[7] >= 0.9 * total);

  Rng rng(3);
  std::vector<float> noise(60 * 16000);
  for (auto& v : noise) v = static_cast<float>(rng.uniform(-0.05, 0.05));
  BandEnergy nb = band_energies({noise}, 8);
  const double mx = *std::max_element(nb.energy.begin(), nb.energy.end());
  const double mn = *std::min_element(nb.energy.begin(), nb.energy.end());
  CHECK(mn > 0.0);
  CHECK(mx / mn < 2.0);

  std::vector<float> silence(16000, 0.0f);
  BandEnergy zb = band_energies({silence}, 8);
  for (double v : zb.energy) CHECK(v == 0.0);

  CHECK_THROWS_AS(band_energies({}, 8), ValidationError);
  CHECK_THROWS_AS(band_energies({tone}, 0), ValidationError);
}

TEST_CASE("attack_waveform is bit-exact for a zero-initialized attacker") {
  models::AttackerNet net = models::attacker_init(9);
  Rng rng(21);
  for (int len : {1, 2, 23, 100, 4096}) {
    audio::Waveform w;
    w.sample_rate = 16000;
    w.samples.resize(static_cast<std::size_t>(len));
    for (auto& v : w.samples) v = static_cast<float>(rng.uniform(-0.7, 0.7));
    const audio::Waveform adv = attack_waveform(net, w);
    REQUIRE(adv.samples.size() == w.samples.size());
    CHECK(std::memcmp(adv.samples.data(), w.samples.data(), w.samples.size() * sizeof(float)) ==
          0);
    CHECK(adv.sample_rate == w.sample_rate);
  }
  audio::Waveform empty;
  CHECK_THROWS_AS(attack_waveform(net, empty), ValidationError);

  models::AttackerNet noisy = noisy_attacker(9);
  audio::Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(3000, 0.0f);
  Rng r2(8);
  for (auto& v : w.samples) v = static_cast<float>(r2.uniform(-0.5, 0.5));
  const audio::Waveform adv = attack_waveform(noisy, w);
  bool moved = false;
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    if (adv.samples[i] != w.samples[i]) moved = true;
  CHECK(moved);
}

TEST_CASE("identity attacker evaluation satisfies the report invariants") {
  const auto testset = small_testset();
  models::AttackerNet attacker = models::attacker_init(2);
  models::SpeakerNet speaker = models::speaker_init(17, 3);

  EvalOptions options;
  options.with_rtf = false;
  const MetricsReport report = evaluate_attack(attacker, speaker, testset, options);
  REQUIRE(report.rows.size() == testset.size());
  for (const auto& row : report.rows) {
    CHECK(row.clean_pred == row.adv_pred);
    CHECK(row.snr.is_infinite);
    CHECK(row.proxy == 35.0);
  }
  CHECK(report.ser_percent == report.clean_error_percent);
  CHECK(report.infinite_snr_rows == static_cast<std::int64_t>(testset.size()));
  CHECK(report.mean_proxy == 35.0);
  CHECK_FALSE(report.low_snr_flag);
  CHECK(report.ptr_percent == -1.0);

  CHECK_THROWS_AS(evaluate_attack(attacker, speaker, {}, options), ValidationError);
}

TEST_CASE("report aggregates reconcile with rows and ignore ordering") {
  const auto testset = small_testset();
  models::AttackerNet attacker = noisy_attacker(4);
  models::SpeakerNet speaker = models::speaker_init(17, 3);

  EvalOptions options;
  options.with_rtf = false;
  const MetricsReport report = evaluate_attack(attacker, speaker, testset, options);

  double snr_sum = 0.0, proxy_sum = 0.0;
  std::int64_t finite = 0, ser_hits = 0;
  for (const auto& row : report.rows) {
    if (!row.snr.is_infinite) {
      snr_sum += row.snr.db;
      ++finite;
    }
    proxy_sum += row.proxy;
    if (row.adv_pred != row.speaker_id) ++ser_hits;
  }
  REQUIRE(finite > 0);
  CHECK(std::abs(report.mean_snr_db - snr_sum / static_cast<double>(finite)) < 1e-6);
  CHECK(report.mean_snr_literal_db == doctest::Approx(2.0 * report.mean_snr_db).epsilon(1e-12));
  CHECK(std::abs(report.mean_proxy - proxy_sum / static_cast<double>(testset.size())) < 1e-6);
  CHECK(report.ser_percent ==
        doctest::Approx(100.0 * static_cast<double>(ser_hits) /
                        static_cast<double>(testset.size())));

  std::vector<corpus::Utterance> reversed(testset.rbegin(), testset.rend());
  const MetricsReport rev = evaluate_attack(attacker, speaker, reversed, options);
  CHECK(rev.ser_percent == report.ser_percent);
  CHECK(rev.clean_error_percent == report.clean_error_percent);
  CHECK(std::abs(rev.mean_snr_db - report.mean_snr_db) < 1e-9);
}

TEST_CASE("ptr excludes the target speaker's own utterances") {
  const auto testset = small_testset();
  models::AttackerNet attacker = models::attacker_init(2);
  models::SpeakerNet speaker = models::speaker_init(17, 3);

  EvalOptions options;
  options.target = 1;
  options.with_rtf = false;
  options.with_quality = false;
  const MetricsReport report = evaluate_attack(attacker, speaker, testset, options);
  CHECK(report.ptr_percent >= 0.0);
  CHECK(report.ptr_percent <= 100.0);

  // Only the target's own utterances -> nothing left to measure.
  std::vector<corpus::Utterance> only_target;
  for (const auto& u : testset)
    if (u.speaker_id == 1) only_target.push_back(u);
  REQUIRE(!only_target.empty());
  CHECK_THROWS_AS(evaluate_attack(attacker, speaker, only_target, options), ValidationError);

  EvalOptions bad;
  bad.target = 99;
  CHECK_THROWS_AS(evaluate_attack(attacker, speaker, testset, bad), ValidationError);
  CHECK_THROWS_AS(ptr(attacker, speaker, testset, -1), ValidationError);
}

TEST_CASE("rtf is positive and stable when the test set doubles") {
  auto testset = small_testset();
  models::AttackerNet attacker = models::attacker_init(2);
  const double once = rtf(attacker, testset);
  CHECK(once > 0.0);

  std::vector<corpus::Utterance> doubled = testset;
  doubled.insert(doubled.end(), testset.begin(), testset.end());
  const double twice = rtf(attacker, doubled);
  CHECK(std::abs(twice - once) / once < 0.2);
  CHECK_THROWS_AS(rtf(attacker, {}), ValidationError);
}

TEST_CASE("perturbation spectrum of the identity attacker is all zero") {
  const auto testset = small_testset();
  models::AttackerNet attacker = models::attacker_init(2);
  const BandEnergy bands = perturbation_spectrum(attacker, testset, 8);
  REQUIRE(bands.num_bands == 8);
  for (double v : bands.energy) CHECK(v == 0.0);

  models::AttackerNet noisy = noisy_attacker(12);
  const BandEnergy nb = perturbation_spectrum(noisy, testset, 8);
  double total = 0.0;
  for (double v : nb.energy) total += v;
  CHECK(total > 0.0);
}

TEST_CASE("report writers emit rows, aggregate, and a trailing timing record") {
  const auto testset = small_testset();
  models::AttackerNet attacker = noisy_attacker(4);
  models::SpeakerNet speaker = models::speaker_init(17, 3);
  EvalOptions options;
  options.with_rtf = false;
  MetricsReport report = evaluate_attack(attacker, speaker, testset, options);
  report.rtf = 0.125;

  std::ostringstream text;
  write_report_text(report, text);
  CHECK(text.str().find("ser ") != std::string::npos);
  CHECK(text.str().find("mean_snr ") != std::string::npos);

  std::ostringstream machine;
  write_report_machine(report, machine);
  std::istringstream lines(machine.str());
  std::string line;
  std::size_t row_lines = 0;
  bool saw_aggregate = false;
  std::string last;
  while (std::getline(lines, line)) {
    if (line.rfind("row ", 0) == 0) ++row_lines;
    if (line.rfind("aggregate ", 0) == 0) saw_aggregate = true;
    last = line;
  }
  CHECK(row_lines == testset.size());
  CHECK(saw_aggregate);
  CHECK(last.rfind("timing ", 0) == 0);
  CHECK(last.find("rtf=0.125") != std::string::npos);

  std::ostringstream bandout;
  write_band_energy(perturbation_spectrum(attacker, testset, 8), bandout);
  std::istringstream bl(bandout.str());
  int bands = 0;
  while (std::getline(bl, line))
    if (line.rfind("band ", 0) == 0) ++bands;
  CHECK(bands == 8);
}
