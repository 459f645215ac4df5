// core/include/srak/grad/tensor.h

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

#ifndef SRAK_GRAD_TENSOR_H_
#define SRAK_GRAD_TENSOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "srak/common/error.h"

namespace srak {
namespace grad {

namespace detail {

// Reverse-mode node. Ops that see a grad-requiring input record parents and a
// backward closure; everything else stays a plain leaf. The closure captures
// the node itself as a raw pointer to avoid an ownership cycle; parents keep
// the upstream nodes alive.
template <typename T>
struct TensorImpl {
  std::vector<std::int64_t> shape;
  std::vector<T> data;
  std::vector<T> grad;  // empty until first touched
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorImpl<T>>> parents;
  std::function<void()> backward_fn;

  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), T(0));
  }
};

}  // namespace detail

template <typename T>
class TensorT {
 public:
  TensorT() = default;

  static TensorT zeros(std::vector<std::int64_t> shape, bool requires_grad = false);
  static TensorT full(std::vector<std::int64_t> shape, T value, bool requires_grad = false);
  static TensorT from_vector(std::vector<std::int64_t> shape, std::vector<T> values,
                             bool requires_grad = false);
  static TensorT scalar(T value, bool requires_grad = false);
  static TensorT wrap(std::shared_ptr<detail::TensorImpl<T>> impl) {
    TensorT t;
    t.impl_ = std::move(impl);
    return t;
  }

  bool defined() const { return impl_ != nullptr; }
  const std::vector<std::int64_t>& shape() const { return impl_->shape; }
  std::int64_t dim(int i) const { return impl_->shape[static_cast<std::size_t>(i)]; }
  int rank() const { return static_cast<int>(impl_->shape.size()); }
  std::int64_t numel() const { return impl_->numel(); }

  T* data() { return impl_->data.data(); }
  const T* data() const { return impl_->data.data(); }
  std::vector<T>& data_vector() { return impl_->data; }
  const std::vector<T>& data_vector() const { return impl_->data; }

  bool requires_grad() const { return impl_->requires_grad; }
  void set_requires_grad(bool b) { impl_->requires_grad = b; }

  bool has_grad() const { return !impl_->grad.empty(); }
  T* grad() {
    impl_->ensure_grad();
    return impl_->grad.data();
  }
  const std::vector<T>& grad_vector() {
    impl_->ensure_grad();
    return impl_->grad;
  }
  void zero_grad() {
    if (!impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), T(0));
  }

  // Scalar convenience; throws unless numel is 1.
  T item() const;

  // Reverse sweep from a scalar. Grads accumulate across repeated calls.
  void backward();

  // Copy of the values with no history.
  TensorT detach() const;

  detail::TensorImpl<T>* impl() const { return impl_.get(); }
  const std::shared_ptr<detail::TensorImpl<T>>& impl_ptr() const { return impl_; }

 private:
  std::shared_ptr<detail::TensorImpl<T>> impl_;
};

using Tensor = TensorT<float>;
using TensorD = TensorT<double>;

extern template class TensorT<float>;
extern template class TensorT<double>;

}  // namespace grad
}  // namespace srak

#endif  // SRAK_GRAD_TENSOR_H_
