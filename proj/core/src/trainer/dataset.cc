// core/src/trainer/dataset.cc

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

#include "srak/trainer/dataset.h"

#include <algorithm>
#include <cstring>

#include "srak/common/error.h"

namespace srak {
namespace trainer {

UtteranceStore load_store(const corpus::CorpusManifest& manifest, const std::string& root) {
  UtteranceStore store;
  for (const auto& entry : manifest.entries) {
    corpus::Utterance utt = corpus::load_utterance(root, entry);
    if (entry.split == corpus::Split::kTrain)
      store.train.push_back(std::move(utt));
    else
      store.test.push_back(std::move(utt));
  }
  if (store.train.empty()) throw ValidationError("corpus has no train utterances");
  if (store.test.empty()) throw ValidationError("corpus has no test utterances");
  return store;
}

std::int64_t frame_positions(std::int64_t len, std::int64_t frame_len, std::int64_t hop) {
  if (frame_len <= 0 || hop <= 0) throw ValidationError("frame_len and hop must be positive");
  if (len < frame_len) return 0;
  return (len - frame_len) / hop + 1;
}

std::vector<FrameRef> all_frames(const std::vector<corpus::Utterance>& utts,
                                 std::int64_t frame_len, std::int64_t hop) {
  std::vector<FrameRef> refs;
  for (int u = 0; u < static_cast<int>(utts.size()); ++u) {
    std::int64_t positions =
        frame_positions(static_cast<std::int64_t>(utts[u].waveform.samples.size()), frame_len, hop);
    for (std::int64_t p = 0; p < positions; ++p) refs.push_back({u, p * hop});
  }
  if (refs.empty()) throw ValidationError("no utterance long enough for one frame");
  return refs;
}

std::vector<FrameRef> sample_epoch_frames(const std::vector<corpus::Utterance>& utts,
                                          std::int64_t frame_len, std::int64_t hop,
                                          int per_utterance, Rng& rng) {
  if (per_utterance <= 0) throw ValidationError("per_utterance must be positive");
  std::vector<FrameRef> refs;
  refs.reserve(utts.size() * static_cast<std::size_t>(per_utterance));
  for (int u = 0; u < static_cast<int>(utts.size()); ++u) {
    std::int64_t positions =
        frame_positions(static_cast<std::int64_t>(utts[u].waveform.samples.size()), frame_len, hop);
    if (positions == 0) continue;
    for (int k = 0; k < per_utterance; ++k) {
      std::int64_t p = rng.uniform_int(0, positions - 1);
      refs.push_back({u, p * hop});
    }
  }
  if (refs.empty()) throw ValidationError("no utterance long enough for one frame");
  rng.shuffle(refs);
  return refs;
}

grad::Tensor gather_frames(const std::vector<corpus::Utterance>& utts, const FrameRef* refs,
                           int n, std::int64_t frame_len) {
  if (n <= 0) throw ValidationError("empty frame batch");
  std::vector<float> data(static_cast<std::size_t>(n) * static_cast<std::size_t>(frame_len));
  for (int i = 0; i < n; ++i) {
    const auto& w = utts[static_cast<std::size_t>(refs[i].utterance)].waveform.samples;
    if (refs[i].offset < 0 ||
        refs[i].offset + frame_len > static_cast<std::int64_t>(w.size()))
      throw ValidationError("frame reference out of range");
    std::memcpy(data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(frame_len),
                w.data() + refs[i].offset, static_cast<std::size_t>(frame_len) * sizeof(float));
  }
  return grad::Tensor::from_vector({n, frame_len}, std::move(data));
}

int center_phoneme(const corpus::Utterance& utt, std::int64_t offset, std::int64_t frame_len) {
  std::int64_t center = offset + frame_len / 2;
  if (center < 0 || center >= static_cast<std::int64_t>(utt.phoneme_labels.size()))
    throw ValidationError("frame center outside utterance");
  return utt.phoneme_labels[static_cast<std::size_t>(center)];
}

}  // namespace trainer
}  // namespace srak
