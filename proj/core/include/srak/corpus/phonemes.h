// core/include/srak/corpus/phonemes.h

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

#ifndef SRAK_CORPUS_PHONEMES_H_
#define SRAK_CORPUS_PHONEMES_H_

#include <array>
#include <string>
#include <vector>

namespace srak {
namespace corpus {

// Fixed synthetic inventory: 9 voiced, 3 unvoiced. The offsets shift the
// speaker's formant centers, so class identity is carried by the offset
// pattern while speaker identity stays in the base positions.
struct Phoneme {
  std::string name;
  bool voiced;
  std::array<float, 4> formant_offset_hz;
};

const std::vector<Phoneme>& phoneme_inventory();

// Index into the inventory; throws ValidationError for unknown names.
int phoneme_index(const std::string& name);

inline constexpr int kNumPhonemes = 12;

}  // namespace corpus
}  // namespace srak

#endif  // SRAK_CORPUS_PHONEMES_H_
