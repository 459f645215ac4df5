// core/include/srak/corpus/builder.h

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

#ifndef SRAK_CORPUS_BUILDER_H_
#define SRAK_CORPUS_BUILDER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "srak/corpus/synthesis.h"

namespace srak {
namespace corpus {

struct CorpusConfig {
  std::uint64_t seed = 7;
  int num_speakers = 20;
  int utterances_per_speaker = 40;
  double test_fraction = 0.2;
  std::string out_dir;
};

struct ManifestEntry {
  std::string path;  // relative to the corpus root
  int speaker_id = -1;
  int utterance_index = -1;  // per speaker, drives seed derivation
  Split split = Split::kTrain;
  std::vector<Segment> segments;
};

struct CorpusManifest {
  std::uint64_t seed = 0;
  int num_speakers = 0;
  int utterances_per_speaker = 0;
  double test_fraction = 0.0;
  std::vector<ManifestEntry> entries;
};

// Seed stream per utterance: generation is a pure function of this value and
// the profile, independent of build order.
std::uint64_t utterance_seed(std::uint64_t corpus_seed, int speaker_id, int utterance_index);

// Canonical segment draw for one utterance: 8..14 segments, any phoneme,
// durations uniform in [60, 200] ms.
std::vector<Segment> utterance_segments(std::uint64_t utt_seed);

// Per-sample labels reconstructed from the segment list; matches what
// synthesize_utterance wrote next to the audio.
std::vector<int> labels_for(const ManifestEntry& entry);

// Synthesizes every utterance, writes PCM16 WAVs under out_dir/wav/ and a
// line-oriented manifest at out_dir/manifest.txt. The last ceil-rounded
// test_fraction of each speaker's utterances form the test split, so every
// speaker appears in both splits. Deterministic: same config, same bytes.
CorpusManifest build_corpus(const CorpusConfig& config);

CorpusManifest load_manifest(const std::string& path);
void save_manifest(const CorpusManifest& manifest, const std::string& path);

// Reads the utterance audio back and rebuilds labels from the manifest line.
Utterance load_utterance(const std::string& root, const ManifestEntry& entry);

}  // namespace corpus
}  // namespace srak

#endif  // SRAK_CORPUS_BUILDER_H_
