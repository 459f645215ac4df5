// core/src/corpus/phonemes.cc

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

#include "srak/corpus/phonemes.h"

#include "srak/common/error.h"

namespace srak {
namespace corpus {

const std::vector<Phoneme>& phoneme_inventory() {
  // Voiced offsets stay within +-450 Hz so shifted centers remain inside the
  // audible band for every profile. Unvoiced classes push all formants up,
  // fricative-style.
  static const std::vector<Phoneme> inv = {
      {"aa", true, {150.0f, -200.0f, 0.0f, 0.0f}},
      {"iy", true, {-130.0f, 450.0f, 200.0f, 0.0f}},
      {"uw", true, {-110.0f, -400.0f, -150.0f, 0.0f}},
      {"eh", true, {60.0f, 150.0f, 80.0f, 0.0f}},
      {"ao", true, {110.0f, -300.0f, -80.0f, 0.0f}},
      {"ah", true, {40.0f, 0.0f, 0.0f, 0.0f}},
      {"er", true, {0.0f, -150.0f, -350.0f, 0.0f}},
      {"ow", true, {-20.0f, -280.0f, 100.0f, 0.0f}},
      {"ey", true, {-70.0f, 330.0f, 160.0f, 0.0f}},
      {"s", false, {500.0f, 900.0f, 700.0f, 400.0f}},
      {"sh", false, {250.0f, 500.0f, 350.0f, 150.0f}},
      {"f", false, {80.0f, 150.0f, 100.0f, 50.0f}},
  };
  return inv;
}

int phoneme_index(const std::string& name) {
  const auto& inv = phoneme_inventory();
  for (int i = 0; i < static_cast<int>(inv.size()); ++i) {
    if (inv[i].name == name) return i;
  }
  throw ValidationError("phoneme_index: unknown phoneme '" + name + "'");
}

}  // namespace corpus
}  // namespace srak
