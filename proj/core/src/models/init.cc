// core/src/models/init.cc

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

#include "srak/models/init.h"

namespace srak {
namespace models {

grad::Tensor normal_init(Rng& rng, std::vector<std::int64_t> shape, double std_dev) {
  grad::Tensor t = grad::Tensor::zeros(shape);
  for (float& v : t.data_vector()) v = static_cast<float>(std_dev * rng.normal());
  t.set_requires_grad(true);
  return t;
}

grad::Tensor zeros_param(std::vector<std::int64_t> shape) {
  grad::Tensor t = grad::Tensor::zeros(std::move(shape));
  t.set_requires_grad(true);
  return t;
}

grad::Tensor ones_param(std::vector<std::int64_t> shape) {
  grad::Tensor t = grad::Tensor::full(std::move(shape), 1.0f);
  t.set_requires_grad(true);
  return t;
}

void set_trainable(const std::vector<grad::Tensor>& params, bool trainable) {
  for (grad::Tensor p : params) p.set_requires_grad(trainable);
}

}  // namespace models
}  // namespace srak
