// core/include/srak/eval/report.h

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

#ifndef SRAK_EVAL_REPORT_H_
#define SRAK_EVAL_REPORT_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "srak/corpus/builder.h"
#include "srak/eval/metrics.h"
#include "srak/models/attacker.h"
#include "srak/models/speaker.h"

namespace srak {
namespace eval {

struct EvalRow {
  int index = -1;  // position in the test set
  int speaker_id = -1;
  int clean_pred = -1;
  int adv_pred = -1;
  Snr snr;
  double proxy = 0.0;
};

struct MetricsReport {
  int target = -1;  // < 0: non-targeted run, ptr_percent not populated
  double ser_percent = 0.0;
  double clean_error_percent = 0.0;
  double ptr_percent = -1.0;
  double mean_snr_db = 0.0;  // finite rows only
  double mean_snr_literal_db = 0.0;  // the paper's printed squared-ratio reading
  std::int64_t infinite_snr_rows = 0;
  double mean_proxy = 0.0;
  double rtf = 0.0;  // timing field, excluded from determinism comparisons
  bool low_snr_flag = false;  // mean SNR below 0 dB
  std::vector<EvalRow> rows;
};

struct EvalOptions {
  int target = -1;
  bool with_quality = true;  // per-row SNR and proxy
  bool with_rtf = true;
};

MetricsReport evaluate_attack(models::AttackerNet& attacker, models::SpeakerNet& speaker,
                              const std::vector<corpus::Utterance>& testset,
                              const EvalOptions& options = {});

// Single-purpose wrappers over evaluate_attack.
double ser(models::AttackerNet& attacker, models::SpeakerNet& speaker,
           const std::vector<corpus::Utterance>& testset);
double ptr(models::AttackerNet& attacker, models::SpeakerNet& speaker,
           const std::vector<corpus::Utterance>& testset, int target);

// Wall-clock of eval-mode attacker inference over total audio duration,
// single-threaded, no file I/O inside the timed region.
double rtf(models::AttackerNet& attacker, const std::vector<corpus::Utterance>& testset);

BandEnergy perturbation_spectrum(models::AttackerNet& attacker,
                                 const std::vector<corpus::Utterance>& testset,
                                 int num_bands = 8);

// Line-oriented table for humans; key=value records for machines (one per
// row, one aggregate, timing last so byte comparisons can drop it).
void write_report_text(const MetricsReport& report, std::ostream& os);
void write_report_machine(const MetricsReport& report, std::ostream& os);
void write_band_energy(const BandEnergy& bands, std::ostream& os);

}  // namespace eval
}  // namespace srak

#endif  // SRAK_EVAL_REPORT_H_
