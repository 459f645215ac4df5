// core/include/srak/trainer/checkpoint.h

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

#ifndef SRAK_TRAINER_CHECKPOINT_H_
#define SRAK_TRAINER_CHECKPOINT_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "srak/grad/tensor.h"
#include "srak/models/attacker.h"
#include "srak/models/phoneme.h"
#include "srak/models/speaker.h"

namespace srak {
namespace trainer {

// On-disk layout: magic "SRAK", version u32, kind (length-prefixed UTF-8),
// tensor count u32, then per tensor name / rank u32 / dims u64 / raw 32-bit
// little-endian values, and a trailing length-prefixed metadata text block of
// key=value lines. Parameters and batchnorm running statistics both live in
// the tensor list.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string kind;  // "speaker" | "phoneme" | "attacker"
  std::vector<std::pair<std::string, grad::Tensor>> tensors;
  std::map<std::string, std::string> metadata;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

// expect_kind empty accepts any kind.
Checkpoint load_checkpoint(const std::string& path, const std::string& expect_kind = "");

// Model bridges. *_from_checkpoint validates kind, names and shapes.
Checkpoint attacker_to_checkpoint(models::AttackerNet& net);
models::AttackerNet attacker_from_checkpoint(const Checkpoint& ckpt);
Checkpoint speaker_to_checkpoint(models::SpeakerNet& net);
models::SpeakerNet speaker_from_checkpoint(const Checkpoint& ckpt);
Checkpoint phoneme_to_checkpoint(models::PhonemeNet& net);
models::PhonemeNet phoneme_from_checkpoint(const Checkpoint& ckpt);

// FNV-1a over the raw little-endian bytes of every tensor, in list order.
// Pins the freeze invariant during attack training.
std::uint64_t parameter_hash(const std::vector<std::pair<std::string, grad::Tensor>>& tensors);

}  // namespace trainer
}  // namespace srak

#endif  // SRAK_TRAINER_CHECKPOINT_H_
