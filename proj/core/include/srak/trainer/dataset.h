// core/include/srak/trainer/dataset.h

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

#ifndef SRAK_TRAINER_DATASET_H_
#define SRAK_TRAINER_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "srak/common/rng.h"
#include "srak/corpus/builder.h"
#include "srak/grad/tensor.h"

namespace srak {
namespace trainer {

// Waveforms stay resident; frames are materialized per batch. A frame is an
// (utterance, sample offset) pair with the offset on the hop grid.
struct FrameRef {
  int utterance = 0;
  std::int64_t offset = 0;
};

struct UtteranceStore {
  std::vector<corpus::Utterance> train;
  std::vector<corpus::Utterance> test;
};

UtteranceStore load_store(const corpus::CorpusManifest& manifest, const std::string& root);

// Number of frame positions on the hop grid; 0 if the utterance is too short.
std::int64_t frame_positions(std::int64_t len, std::int64_t frame_len, std::int64_t hop);

// All positions, utterance order.
std::vector<FrameRef> all_frames(const std::vector<corpus::Utterance>& utts,
                                 std::int64_t frame_len, std::int64_t hop);

// per_utterance positions drawn with replacement from each utterance's grid,
// then shuffled. Bounds the epoch cost on dense hop grids.
std::vector<FrameRef> sample_epoch_frames(const std::vector<corpus::Utterance>& utts,
                                          std::int64_t frame_len, std::int64_t hop,
                                          int per_utterance, Rng& rng);

// Stacks n frames into [n, frame_len].
grad::Tensor gather_frames(const std::vector<corpus::Utterance>& utts, const FrameRef* refs,
                           int n, std::int64_t frame_len);

// Phoneme label at the frame's center sample.
int center_phoneme(const corpus::Utterance& utt, std::int64_t offset, std::int64_t frame_len);

}  // namespace trainer
}  // namespace srak

#endif  // SRAK_TRAINER_DATASET_H_
