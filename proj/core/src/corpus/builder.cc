// core/src/corpus/builder.cc

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

#include "srak/corpus/builder.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "srak/common/error.h"
#include "srak/common/rng.h"

namespace srak {
namespace corpus {

namespace {

constexpr int kSamplesPerMs = audio::kSampleRate / 1000;

int test_count(int utterances_per_speaker, double test_fraction) {
  int n = static_cast<int>(std::lround(utterances_per_speaker * test_fraction));
  if (n < 1) n = 1;
  if (n > utterances_per_speaker - 1) n = utterances_per_speaker - 1;
  return n;
}

std::string utterance_path(int speaker_id, int utterance_index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "wav/spk%02d/utt%03d.wav", speaker_id, utterance_index);
  return buf;
}

std::string format_segments(const std::vector<Segment>& segs) {
  const auto& inv = phoneme_inventory();
  std::string out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i) out += ',';
    out += inv[static_cast<std::size_t>(segs[i].phoneme)].name;
    out += ':';
    out += std::to_string(segs[i].duration_ms);
  }
  return out;
}

std::vector<Segment> parse_segments(const std::string& field, const std::string& context) {
  std::vector<Segment> segs;
  std::stringstream ss(field);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw ValidationError("manifest: bad segment token '" + tok + "' in " + context);
    Segment s;
    s.phoneme = phoneme_index(tok.substr(0, colon));
    s.duration_ms = std::stoi(tok.substr(colon + 1));
    segs.push_back(s);
  }
  if (segs.empty()) throw ValidationError("manifest: empty segment list in " + context);
  return segs;
}

}  // namespace

std::uint64_t utterance_seed(std::uint64_t corpus_seed, int speaker_id, int utterance_index) {
  return mix_seed(mix_seed(corpus_seed, static_cast<std::uint64_t>(speaker_id)),
                  0x5EB5ULL + static_cast<std::uint64_t>(utterance_index));
}

std::vector<Segment> utterance_segments(std::uint64_t utt_seed) {
  Rng rng(mix_seed(utt_seed, 1));
  const int n_seg = static_cast<int>(rng.uniform_int(8, 14));
  std::vector<Segment> segs(static_cast<std::size_t>(n_seg));
  for (Segment& s : segs) {
    s.phoneme = static_cast<int>(rng.uniform_int(0, kNumPhonemes - 1));
    s.duration_ms = static_cast<int>(rng.uniform_int(60, 200));
  }
  return segs;
}

std::vector<int> labels_for(const ManifestEntry& entry) {
  std::vector<int> labels;
  for (const Segment& s : entry.segments)
    labels.insert(labels.end(), static_cast<std::size_t>(s.duration_ms * kSamplesPerMs),
                  s.phoneme);
  return labels;
}

CorpusManifest build_corpus(const CorpusConfig& config) {
  if (config.num_speakers < 2)
    throw ValidationError("build_corpus: need at least 2 speakers");
  if (config.utterances_per_speaker < 2)
    throw ValidationError("build_corpus: need at least 2 utterances per speaker");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
    throw ValidationError("build_corpus: test_fraction must lie in (0, 1)");
  if (config.out_dir.empty()) throw ValidationError("build_corpus: out_dir not set");

  namespace fs = std::filesystem;
  const int n_test = test_count(config.utterances_per_speaker, config.test_fraction);

  CorpusManifest manifest;
  manifest.seed = config.seed;
  manifest.num_speakers = config.num_speakers;
  manifest.utterances_per_speaker = config.utterances_per_speaker;
  manifest.test_fraction = config.test_fraction;

  for (int spk = 0; spk < config.num_speakers; ++spk) {
    const SpeakerProfile profile = generate_profile(config.seed, spk);
    fs::create_directories((fs::path(config.out_dir) / utterance_path(spk, 0)).parent_path());
    for (int idx = 0; idx < config.utterances_per_speaker; ++idx) {
      const std::uint64_t useed = utterance_seed(config.seed, spk, idx);
      ManifestEntry entry;
      entry.path = utterance_path(spk, idx);
      entry.speaker_id = spk;
      entry.utterance_index = idx;
      entry.split = idx >= config.utterances_per_speaker - n_test ? Split::kTest : Split::kTrain;
      entry.segments = utterance_segments(useed);

      Utterance utt = synthesize_utterance(profile, entry.segments, mix_seed(useed, 2));
      utt.split = entry.split;
      audio::save_wav(utt.waveform, (fs::path(config.out_dir) / entry.path).string());
      manifest.entries.push_back(std::move(entry));
    }
  }

  save_manifest(manifest, (fs::path(config.out_dir) / "manifest.txt").string());
  return manifest;
}

void save_manifest(const CorpusManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save_manifest: cannot open " + path);
  char header[160];
  std::snprintf(header, sizeof(header),
                "srak-corpus-v1 seed=%llu speakers=%d utterances_per_speaker=%d test_fraction=%.4f\n",
                static_cast<unsigned long long>(manifest.seed), manifest.num_speakers,
                manifest.utterances_per_speaker, manifest.test_fraction);
  out << header;
  for (const ManifestEntry& e : manifest.entries) {
    out << e.path << ' ' << e.speaker_id << ' '
        << (e.split == Split::kTest ? "test" : "train") << ' ' << format_segments(e.segments)
        << '\n';
  }
  if (!out) throw IoError("save_manifest: write failed for " + path);
}

CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_manifest: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("load_manifest: empty file " + path);
  std::stringstream hs(line);
  std::string magic;
  hs >> magic;
  if (magic != "srak-corpus-v1")
    throw ValidationError("load_manifest: bad header in " + path);

  CorpusManifest manifest;
  std::string kv;
  while (hs >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ValidationError("load_manifest: bad header field '" + kv + "'");
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    if (key == "seed") manifest.seed = std::stoull(val);
    else if (key == "speakers") manifest.num_speakers = std::stoi(val);
    else if (key == "utterances_per_speaker") manifest.utterances_per_speaker = std::stoi(val);
    else if (key == "test_fraction") manifest.test_fraction = std::stod(val);
    else throw ValidationError("load_manifest: unknown header field '" + key + "'");
  }

  std::vector<int> next_index(static_cast<std::size_t>(manifest.num_speakers), 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    ManifestEntry e;
    std::string split, segfield;
    if (!(ls >> e.path >> e.speaker_id >> split >> segfield))
      throw ValidationError("load_manifest: bad entry line '" + line + "'");
    if (split == "train") e.split = Split::kTrain;
    else if (split == "test") e.split = Split::kTest;
    else throw ValidationError("load_manifest: bad split '" + split + "'");
    if (e.speaker_id < 0 || e.speaker_id >= manifest.num_speakers)
      throw ValidationError("load_manifest: speaker_id out of range in '" + line + "'");
    e.segments = parse_segments(segfield, e.path);
    e.utterance_index = next_index[static_cast<std::size_t>(e.speaker_id)]++;
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

Utterance load_utterance(const std::string& root, const ManifestEntry& entry) {
  Utterance utt;
  utt.waveform = audio::load_wav((std::filesystem::path(root) / entry.path).string(),
                                 audio::kSampleRate);
  utt.speaker_id = entry.speaker_id;
  utt.split = entry.split;
  utt.phoneme_labels = labels_for(entry);
  if (utt.phoneme_labels.size() != utt.waveform.samples.size())
    throw ValidationError("load_utterance: label length does not match audio for " + entry.path);
  return utt;
}

}  // namespace corpus
}  // namespace srak
