// core/include/srak/trainer/trainer.h

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

#ifndef SRAK_TRAINER_TRAINER_H_
#define SRAK_TRAINER_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "srak/corpus/builder.h"
#include "srak/losses/losses.h"
#include "srak/models/attacker.h"
#include "srak/models/phoneme.h"
#include "srak/models/speaker.h"
#include "srak/trainer/checkpoint.h"
#include "srak/trainer/dataset.h"

namespace srak {
namespace trainer {

struct TrainConfig {
  std::uint64_t seed = 7;
  float learning_rate = 3e-4f;
  int epochs = 10;
  int batch_size = 64;
  std::int64_t frame_len = 3200;
  std::int64_t hop = 160;
  // Epoch cost bound: positions are drawn per utterance from the hop grid
  // instead of sweeping the full grid.
  int frames_per_utterance = 6;
  losses::AttackLossConfig attack;
};

void validate_train_config(const TrainConfig& cfg);

// Evaluation framing: half-frame overlap is plenty for sentence decisions.
inline constexpr std::int64_t kEvalHop = 1600;

struct PretrainMetrics {
  std::vector<double> epoch_losses;
  double train_frame_accuracy = 0.0;
  double test_frame_accuracy = 0.0;
  double test_sentence_accuracy = 0.0;
};

struct PhonemeMetrics {
  std::vector<double> epoch_losses;
  double test_frame_error_rate = 1.0;
};

struct AttackMetrics {
  std::vector<losses::LossBreakdown> batches;
  std::vector<double> epoch_mean_total;
  double max_identity_rel_dev = 0.0;
  std::uint64_t frozen_hash_before = 0;
  std::uint64_t frozen_hash_after = 0;
};

Checkpoint pretrain_speaker(const UtteranceStore& store, int num_speakers,
                            const TrainConfig& cfg, PretrainMetrics* metrics = nullptr);
Checkpoint pretrain_phoneme(const UtteranceStore& store, const TrainConfig& cfg,
                            PhonemeMetrics* metrics = nullptr);

// Frozen target + helper come from checkpoints; only the attacker trains.
// Per-batch: peak-normalize frames, attacker in train mode, denormalize with
// the same scales, frozen eval-mode speaker/phoneme forwards, combined loss,
// Adam on attacker parameters. The frozen parameter hash must not move.
Checkpoint train_attacker(const UtteranceStore& store, const Checkpoint& speaker_ckpt,
                          const Checkpoint& phoneme_ckpt, const TrainConfig& cfg,
                          AttackMetrics* metrics = nullptr);

// Eval-mode helpers.
int classify_sentence(models::SpeakerNet& net, const std::vector<float>& samples);
double speaker_sentence_accuracy(models::SpeakerNet& net,
                                 const std::vector<corpus::Utterance>& utts);
double speaker_frame_accuracy(models::SpeakerNet& net,
                              const std::vector<corpus::Utterance>& utts);
double phoneme_frame_error_rate(models::PhonemeNet& net,
                                const std::vector<corpus::Utterance>& utts);

}  // namespace trainer
}  // namespace srak

#endif  // SRAK_TRAINER_TRAINER_H_
