// core/include/srak/grad/adam.h

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

#ifndef SRAK_GRAD_ADAM_H_
#define SRAK_GRAD_ADAM_H_

#include <cstdint>
#include <vector>

#include "srak/grad/tensor.h"

namespace srak {
namespace grad {

// Adam with bias correction. A parameter whose grad buffer was never touched
// counts as having a zero gradient. Any non-finite gradient rejects the whole
// step before any state is mutated.
template <typename T>
class AdamT {
 public:
  AdamT(std::vector<TensorT<T>> params, T lr, T beta1 = T(0.9), T beta2 = T(0.999),
        T eps = T(1e-8));

  void step();
  void zero_grad();

  std::int64_t steps_taken() const { return t_; }
  T learning_rate() const { return lr_; }
  void set_learning_rate(T lr) { lr_ = lr; }

 private:
  std::vector<TensorT<T>> params_;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
  T lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
};

using Adam = AdamT<float>;

extern template class AdamT<float>;
extern template class AdamT<double>;

}  // namespace grad
}  // namespace srak

#endif  // SRAK_GRAD_ADAM_H_
