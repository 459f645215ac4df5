// core/src/eval/report.cc

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

#include "srak/eval/report.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "srak/common/error.h"
#include "srak/trainer/trainer.h"

namespace srak {
namespace eval {

namespace {

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_snr(const Snr& s) { return s.is_infinite ? "inf" : fmt_g17(s.db); }

}  // namespace

MetricsReport evaluate_attack(models::AttackerNet& attacker, models::SpeakerNet& speaker,
                              const std::vector<corpus::Utterance>& testset,
                              const EvalOptions& options) {
  if (testset.empty()) throw ValidationError("evaluate_attack: empty test set");
  if (options.target >= speaker.num_speakers)
    throw ValidationError("evaluate_attack: target out of range");

  MetricsReport report;
  report.target = options.target;
  report.rows.reserve(testset.size());

  double snr_sum = 0.0, proxy_sum = 0.0;
  std::int64_t ser_hits = 0, clean_errors = 0;
  std::int64_t ptr_hits = 0, ptr_rows = 0;

  for (std::size_t i = 0; i < testset.size(); ++i) {
    const auto& utt = testset[i];
    EvalRow row;
    row.index = static_cast<int>(i);
    row.speaker_id = utt.speaker_id;
    row.clean_pred = trainer::classify_sentence(speaker, utt.waveform.samples);
    const audio::Waveform adv = attack_waveform(attacker, utt.waveform);
    row.adv_pred = trainer::classify_sentence(speaker, adv.samples);
    if (options.with_quality) {
      row.snr = snr(utt.waveform.samples, adv.samples);
      row.proxy = perceptual_proxy(utt.waveform.samples, adv.samples);
      if (row.snr.is_infinite)
        ++report.infinite_snr_rows;
      else
        snr_sum += row.snr.db;
      proxy_sum += row.proxy;
    }
    if (row.adv_pred != utt.speaker_id) ++ser_hits;
    if (row.clean_pred != utt.speaker_id) ++clean_errors;
    if (options.target >= 0 && utt.speaker_id != options.target) {
      ++ptr_rows;
      if (row.adv_pred == options.target) ++ptr_hits;
    }
    report.rows.push_back(row);
  }

  const double n = static_cast<double>(testset.size());
  report.ser_percent = 100.0 * static_cast<double>(ser_hits) / n;
  report.clean_error_percent = 100.0 * static_cast<double>(clean_errors) / n;
  if (options.target >= 0) {
    if (ptr_rows == 0)
      throw ValidationError("evaluate_attack: no utterances left after excluding the target");
    report.ptr_percent = 100.0 * static_cast<double>(ptr_hits) / static_cast<double>(ptr_rows);
  }
  if (options.with_quality) {
    const std::int64_t finite =
        static_cast<std::int64_t>(testset.size()) - report.infinite_snr_rows;
    report.mean_snr_db = finite > 0 ? snr_sum / static_cast<double>(finite) : 0.0;
    report.mean_snr_literal_db = 2.0 * report.mean_snr_db;
    report.mean_proxy = proxy_sum / n;
    report.low_snr_flag = finite > 0 && report.mean_snr_db < 0.0;
  }
  if (options.with_rtf) report.rtf = rtf(attacker, testset);
  return report;
}

double ser(models::AttackerNet& attacker, models::SpeakerNet& speaker,
           const std::vector<corpus::Utterance>& testset) {
  EvalOptions options;
  options.with_quality = false;
  options.with_rtf = false;
  return evaluate_attack(attacker, speaker, testset, options).ser_percent;
}

double ptr(models::AttackerNet& attacker, models::SpeakerNet& speaker,
           const std::vector<corpus::Utterance>& testset, int target) {
  if (target < 0) throw ValidationError("ptr: target required");
  EvalOptions options;
  options.target = target;
  options.with_quality = false;
  options.with_rtf = false;
  return evaluate_attack(attacker, speaker, testset, options).ptr_percent;
}

double rtf(models::AttackerNet& attacker, const std::vector<corpus::Utterance>& testset) {
  if (testset.empty()) throw ValidationError("rtf: empty test set");
  double audio_seconds = 0.0;
  for (const auto& utt : testset)
    audio_seconds += static_cast<double>(utt.waveform.samples.size()) /
                     static_cast<double>(utt.waveform.sample_rate);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& utt : testset) {
    const audio::Waveform adv = attack_waveform(attacker, utt.waveform);
    (void)adv;
  }
  const auto stop = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(stop - start).count();
  return seconds / audio_seconds;
}

BandEnergy perturbation_spectrum(models::AttackerNet& attacker,
                                 const std::vector<corpus::Utterance>& testset, int num_bands) {
  if (testset.empty()) throw ValidationError("perturbation_spectrum: empty test set");
  std::vector<std::vector<float>> deltas;
  deltas.reserve(testset.size());
  for (const auto& utt : testset) {
    const audio::Waveform adv = attack_waveform(attacker, utt.waveform);
    std::vector<float> d(utt.waveform.samples.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = adv.samples[i] - utt.waveform.samples[i];
    deltas.push_back(std::move(d));
  }
  return band_energies(deltas, num_bands);
}

void write_report_text(const MetricsReport& report, std::ostream& os) {
  char line[160];
  os << "  utt  speaker  clean  adv      snr_db    proxy\n";
  for (const auto& r : report.rows) {
    if (r.snr.is_infinite)
      std::snprintf(line, sizeof(line), "%5d %8d %6d %4d         inf %8.2f\n", r.index,
                    r.speaker_id, r.clean_pred, r.adv_pred, r.proxy);
    else
      std::snprintf(line, sizeof(line), "%5d %8d %6d %4d %11.2f %8.2f\n", r.index, r.speaker_id,
                    r.clean_pred, r.adv_pred, r.snr.db, r.proxy);
    os << line;
  }
  std::snprintf(line, sizeof(line), "ser %.2f%%  clean_error %.2f%%\n", report.ser_percent,
                report.clean_error_percent);
  os << line;
  if (report.target >= 0) {
    std::snprintf(line, sizeof(line), "ptr %.2f%% (target %d)\n", report.ptr_percent,
                  report.target);
    os << line;
  }
  std::snprintf(line, sizeof(line),
                "mean_snr %.2f dB (%lld rows at +inf)  literal-form reading %.2f dB\n",
                report.mean_snr_db, static_cast<long long>(report.infinite_snr_rows),
                report.mean_snr_literal_db);
  os << line;
  std::snprintf(line, sizeof(line), "mean_proxy %.2f\n", report.mean_proxy);
  os << line;
  if (report.low_snr_flag) os << "flag: mean SNR below 0 dB\n";
  std::snprintf(line, sizeof(line), "rtf %.4f (timing)\n", report.rtf);
  os << line;
}

void write_report_machine(const MetricsReport& report, std::ostream& os) {
  for (const auto& r : report.rows) {
    os << "row index=" << r.index << " speaker=" << r.speaker_id << " clean=" << r.clean_pred
       << " adv=" << r.adv_pred << " snr_db=" << fmt_snr(r.snr) << " proxy=" << fmt_g17(r.proxy)
       << "\n";
  }
  os << "aggregate rows=" << report.rows.size() << " ser_percent="
     << fmt_g17(report.ser_percent) << " clean_error_percent="
     << fmt_g17(report.clean_error_percent);
  if (report.target >= 0)
    os << " target=" << report.target << " ptr_percent=" << fmt_g17(report.ptr_percent);
  os << " mean_snr_db=" << fmt_g17(report.mean_snr_db) << " mean_snr_literal_db="
     << fmt_g17(report.mean_snr_literal_db) << " infinite_snr_rows=" << report.infinite_snr_rows
     << " mean_proxy=" << fmt_g17(report.mean_proxy) << " low_snr_flag="
     << (report.low_snr_flag ? 1 : 0) << "\n";
  os << "timing rtf=" << fmt_g17(report.rtf) << "\n";
}

void write_band_energy(const BandEnergy& bands, std::ostream& os) {
  for (int i = 0; i < bands.num_bands; ++i) {
    os << "band " << fmt_g17(bands.band_low_hz(i)) << " " << fmt_g17(bands.band_high_hz(i)) << " "
       << fmt_g17(bands.energy[static_cast<std::size_t>(i)]) << "\n";
  }
}

}  // namespace eval
}  // namespace srak
