// core/include/srak/models/init.h

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

#ifndef SRAK_MODELS_INIT_H_
#define SRAK_MODELS_INIT_H_

#include <cstdint>
#include <vector>

#include "srak/common/rng.h"
#include "srak/grad/tensor.h"

namespace srak {
namespace models {

// He-style normal fill, std = sqrt(2 / fan_in). Draw order is the flat
// element order, so init is a pure function of the rng stream position.
grad::Tensor normal_init(Rng& rng, std::vector<std::int64_t> shape, double std_dev);

inline grad::Tensor conv_init(Rng& rng, std::int64_t ch_out, std::int64_t ch_in, std::int64_t k) {
  const double std_dev = std::sqrt(2.0 / static_cast<double>(ch_in * k));
  return normal_init(rng, {ch_out, ch_in, k}, std_dev);
}

inline grad::Tensor affine_init(Rng& rng, std::int64_t m, std::int64_t n) {
  const double std_dev = std::sqrt(2.0 / static_cast<double>(n));
  return normal_init(rng, {m, n}, std_dev);
}

grad::Tensor zeros_param(std::vector<std::int64_t> shape);
grad::Tensor ones_param(std::vector<std::int64_t> shape);

void set_trainable(const std::vector<grad::Tensor>& params, bool trainable);

}  // namespace models
}  // namespace srak

#endif  // SRAK_MODELS_INIT_H_
