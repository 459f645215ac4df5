// core/src/models/logits.cc

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

#include "srak/models/logits.h"

#include <cmath>

#include "srak/common/error.h"
#include "srak/grad/ops.h"

namespace srak {
namespace models {

std::vector<Logits> extract_logits(const grad::Tensor& logits) {
  if (logits.rank() != 2 || logits.dim(1) < 2)
    throw ValidationError("extract_logits: expected [batch, classes >= 2]");
  std::vector<std::int64_t> first, second;
  grad::row_argmax_top2(logits, &first, &second);

  const std::int64_t b = logits.dim(0), c = logits.dim(1);
  std::vector<Logits> out(static_cast<std::size_t>(b));
  const float* data = logits.data();
  for (std::int64_t i = 0; i < b; ++i) {
    Logits& l = out[static_cast<std::size_t>(i)];
    l.values.assign(data + i * c, data + (i + 1) * c);
    l.first = static_cast<int>(first[static_cast<std::size_t>(i)]);
    l.second = static_cast<int>(second[static_cast<std::size_t>(i)]);
  }
  return out;
}

int sentence_decision(const std::vector<Logits>& frames) {
  if (frames.empty()) throw ValidationError("sentence_decision: no frames");
  const std::size_t c = frames[0].values.size();
  std::vector<double> mean_lsm(c, 0.0);
  for (const Logits& f : frames) {
    if (f.values.size() != c)
      throw ValidationError("sentence_decision: inconsistent class counts");
    double mx = f.values[0];
    for (float v : f.values) mx = std::max(mx, static_cast<double>(v));
    double lse = 0.0;
    for (float v : f.values) lse += std::exp(static_cast<double>(v) - mx);
    lse = mx + std::log(lse);
    for (std::size_t k = 0; k < c; ++k) mean_lsm[k] += f.values[k] - lse;
  }
  int best = 0;
  for (std::size_t k = 1; k < c; ++k)
    if (mean_lsm[k] > mean_lsm[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  return best;
}

}  // namespace models
}  // namespace srak
