// core/src/grad/adam.cc

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

#include "srak/grad/adam.h"

#include <cmath>
#include <string>

namespace srak {
namespace grad {

template <typename T>
AdamT<T>::AdamT(std::vector<TensorT<T>> params, T lr, T beta1, T beta2, T eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (lr_ <= 0) throw ValidationError("adam: learning rate must be positive");
  m_.resize(params_.size());
  v_.resize(params_.size());
  for (std::size_t p = 0; p < params_.size(); p++) {
    if (!params_[p].defined()) throw ValidationError("adam: undefined parameter");
    m_[p].assign(params_[p].data_vector().size(), T(0));
    v_[p].assign(params_[p].data_vector().size(), T(0));
  }
}

template <typename T>
void AdamT<T>::step() {
  for (std::size_t p = 0; p < params_.size(); p++) {
    if (!params_[p].has_grad()) continue;
    const std::vector<T>& g = params_[p].grad_vector();
    for (std::size_t i = 0; i < g.size(); i++) {
      if (!std::isfinite(g[i])) {
        throw NumericError("adam: non-finite gradient in parameter " + std::to_string(p));
      }
    }
  }
  t_++;
  const double bc1 = 1.0 - std::pow(static_cast<double>(beta1_), static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(static_cast<double>(beta2_), static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); p++) {
    T* x = params_[p].data();
    const bool has = params_[p].has_grad();
    const T* g = has ? params_[p].grad() : nullptr;
    std::vector<T>& m = m_[p];
    std::vector<T>& v = v_[p];
    for (std::size_t i = 0; i < m.size(); i++) {
      const T gi = has ? g[i] : T(0);
      m[i] = beta1_ * m[i] + (T(1) - beta1_) * gi;
      v[i] = beta2_ * v[i] + (T(1) - beta2_) * gi * gi;
      const T mhat = static_cast<T>(m[i] / bc1);
      const T vhat = static_cast<T>(v[i] / bc2);
      x[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

template <typename T>
void AdamT<T>::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

template class AdamT<float>;
template class AdamT<double>;

}  // namespace grad
}  // namespace srak
