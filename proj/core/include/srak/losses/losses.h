// core/include/srak/losses/losses.h

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

#ifndef SRAK_LOSSES_LOSSES_H_
#define SRAK_LOSSES_LOSSES_H_

#include <vector>

#include "srak/grad/tensor.h"

namespace srak {
namespace losses {

struct AttackLossConfig {
  float lambda_phn = 1.0f;
  float lambda_norm = 1000.0f;
  float margin_m = 0.01f;
  int target = -1;  // -1 = non-targeted
};

struct LossBreakdown {
  double l_spk = 0.0;
  double l_phn = 0.0;
  double l_norm = 0.0;
  double l_total = 0.0;
};

void validate_config(const AttackLossConfig& cfg, int num_classes);

// Margin loss on the frame whose argmax still equals the true speaker:
// values[I_1st] - values[I_2nd] there, 0 once the attack has flipped the
// frame. Each frame takes its own branch; the batch loss is the mean.
template <typename T>
grad::TensorT<T> l_spk_nontargeted(const grad::TensorT<T>& logits, const std::vector<int>& y_spk);

// Targeted variant: values[I_1st] - values[target] until the argmax lands on
// the target.
template <typename T>
grad::TensorT<T> l_spk_targeted(const grad::TensorT<T>& logits, int y_target);

// KL(p_clean || p_adv) per frame, batch mean. Logs clamped below at 1e-8; the
// clean branch is detached and contributes no gradient.
template <typename T>
grad::TensorT<T> l_phn(const grad::TensorT<T>& p_clean, const grad::TensorT<T>& p_adv);

// Two-sided hinge on |s - s_adv| beyond margin m, squared, mean over samples.
template <typename T>
grad::TensorT<T> l_norm(const grad::TensorT<T>& s, const grad::TensorT<T>& s_adv, T margin_m);

// total = spk + lambda_phn * phn + lambda_norm * nrm. Fills the breakdown
// with the component values actually used.
template <typename T>
grad::TensorT<T> l_total(const grad::TensorT<T>& spk, const grad::TensorT<T>& phn,
                         const grad::TensorT<T>& nrm, const AttackLossConfig& cfg,
                         LossBreakdown* breakdown);

}  // namespace losses
}  // namespace srak

#endif  // SRAK_LOSSES_LOSSES_H_
