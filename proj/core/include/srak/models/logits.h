// core/include/srak/models/logits.h

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

#ifndef SRAK_MODELS_LOGITS_H_
#define SRAK_MODELS_LOGITS_H_

#include <vector>

#include "srak/grad/tensor.h"

namespace srak {
namespace models {

// One frame's class scores with the top-two indices cached. Ties break to the
// lowest index, so first != second always holds for >= 2 classes.
struct Logits {
  std::vector<float> values;
  int first = -1;
  int second = -1;
};

// Row-wise extraction from a [batch, classes] tensor. Values only, no graph.
std::vector<Logits> extract_logits(const grad::Tensor& logits);

// Sentence aggregation: argmax over classes of the mean per-frame
// log-softmax; ties to the lowest index. Throws on empty input.
int sentence_decision(const std::vector<Logits>& frames);

}  // namespace models
}  // namespace srak

#endif  // SRAK_MODELS_LOGITS_H_
