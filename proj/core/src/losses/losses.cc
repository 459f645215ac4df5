// core/src/losses/losses.cc

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

#include "srak/losses/losses.h"

#include "srak/common/error.h"
#include "srak/grad/ops.h"

namespace srak {
namespace losses {

void validate_config(const AttackLossConfig& cfg, int num_classes) {
  if (cfg.lambda_phn < 0.0f) throw ValidationError("attack loss: lambda_phn must be >= 0");
  if (cfg.lambda_norm < 0.0f) throw ValidationError("attack loss: lambda_norm must be >= 0");
  if (!(cfg.margin_m > 0.0f)) throw ValidationError("attack loss: margin_m must be > 0");
  if (cfg.target >= num_classes)
    throw ValidationError("attack loss: target class out of range");
}

template <typename T>
grad::TensorT<T> l_spk_nontargeted(const grad::TensorT<T>& logits, const std::vector<int>& y_spk) {
  if (logits.rank() != 2 || logits.dim(1) < 2)
    throw ValidationError("l_spk: expected logits [batch, classes >= 2]");
  const std::int64_t b = logits.dim(0), c = logits.dim(1);
  if (static_cast<std::int64_t>(y_spk.size()) != b)
    throw ValidationError("l_spk: one label per frame required");
  for (int y : y_spk)
    if (y < 0 || y >= static_cast<int>(c)) throw ValidationError("l_spk: label out of range");

  std::vector<std::int64_t> first, second;
  grad::row_argmax_top2(logits, &first, &second);

  std::vector<T> mask(static_cast<std::size_t>(b));
  for (std::int64_t i = 0; i < b; ++i)
    mask[static_cast<std::size_t>(i)] =
        first[static_cast<std::size_t>(i)] == y_spk[static_cast<std::size_t>(i)] ? T(1) : T(0);

  const auto diff = grad::sub(grad::pick_rows(logits, first), grad::pick_rows(logits, second));
  return grad::reduce_mean(grad::mul(diff, grad::TensorT<T>::from_vector({b}, mask)));
}

template <typename T>
grad::TensorT<T> l_spk_targeted(const grad::TensorT<T>& logits, int y_target) {
  if (logits.rank() != 2 || logits.dim(1) < 2)
    throw ValidationError("l_spk: expected logits [batch, classes >= 2]");
  const std::int64_t b = logits.dim(0), c = logits.dim(1);
  if (y_target < 0 || y_target >= static_cast<int>(c))
    throw ValidationError("l_spk: target class out of range");

  std::vector<std::int64_t> first, second;
  grad::row_argmax_top2(logits, &first, &second);

  std::vector<std::int64_t> tgt(static_cast<std::size_t>(b), y_target);
  std::vector<T> mask(static_cast<std::size_t>(b));
  for (std::int64_t i = 0; i < b; ++i)
    mask[static_cast<std::size_t>(i)] =
        first[static_cast<std::size_t>(i)] == y_target ? T(0) : T(1);

  const auto diff = grad::sub(grad::pick_rows(logits, first), grad::pick_rows(logits, tgt));
  return grad::reduce_mean(grad::mul(diff, grad::TensorT<T>::from_vector({b}, mask)));
}

template <typename T>
grad::TensorT<T> l_phn(const grad::TensorT<T>& p_clean, const grad::TensorT<T>& p_adv) {
  if (p_clean.rank() != 2 || p_adv.rank() != 2 || p_clean.shape() != p_adv.shape())
    throw ValidationError("l_phn: posterior shapes must match");
  const T floor = T(1e-8);
  const auto pc = p_clean.detach();
  const auto gap = grad::sub(grad::log_clamped(pc, floor), grad::log_clamped(p_adv, floor));
  return grad::reduce_mean(grad::reduce_sum_rows(grad::mul(pc, gap)));
}

template <typename T>
grad::TensorT<T> l_norm(const grad::TensorT<T>& s, const grad::TensorT<T>& s_adv, T margin_m) {
  if (s.shape() != s_adv.shape()) throw ValidationError("l_norm: shapes must match");
  if (!(margin_m > T(0))) throw ValidationError("l_norm: margin must be > 0");
  const auto over = grad::relu(grad::add_scalar(grad::absolute(grad::sub(s, s_adv)), -margin_m));
  return grad::reduce_mean(grad::mul(over, over));
}

template <typename T>
grad::TensorT<T> l_total(const grad::TensorT<T>& spk, const grad::TensorT<T>& phn,
                         const grad::TensorT<T>& nrm, const AttackLossConfig& cfg,
                         LossBreakdown* breakdown) {
  auto total = grad::add(
      spk, grad::add(grad::mul_scalar(phn, static_cast<T>(cfg.lambda_phn)),
                     grad::mul_scalar(nrm, static_cast<T>(cfg.lambda_norm))));
  if (breakdown) {
    breakdown->l_spk = static_cast<double>(spk.item());
    breakdown->l_phn = static_cast<double>(phn.item());
    breakdown->l_norm = static_cast<double>(nrm.item());
    breakdown->l_total = static_cast<double>(total.item());
  }
  return total;
}

#define SRAK_INSTANTIATE_LOSSES(T)                                                            \
  template grad::TensorT<T> l_spk_nontargeted<T>(const grad::TensorT<T>&,                     \
                                                 const std::vector<int>&);                    \
  template grad::TensorT<T> l_spk_targeted<T>(const grad::TensorT<T>&, int);                  \
  template grad::TensorT<T> l_phn<T>(const grad::TensorT<T>&, const grad::TensorT<T>&);       \
  template grad::TensorT<T> l_norm<T>(const grad::TensorT<T>&, const grad::TensorT<T>&, T);   \
  template grad::TensorT<T> l_total<T>(const grad::TensorT<T>&, const grad::TensorT<T>&,      \
                                       const grad::TensorT<T>&, const AttackLossConfig&,      \
                                       LossBreakdown*);

SRAK_INSTANTIATE_LOSSES(float)
SRAK_INSTANTIATE_LOSSES(double)

#undef SRAK_INSTANTIATE_LOSSES

}  // namespace losses
}  // namespace srak
