// core/src/grad/tensor.cc

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

#include "srak/grad/tensor.h"

#include <unordered_set>

namespace srak {
namespace grad {

namespace {

template <typename T>
std::int64_t shape_product(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (auto d : shape) {
    if (d < 0) throw ValidationError("tensor dimension must be nonnegative");
    n *= d;
  }
  return n;
}

}  // namespace

template <typename T>
TensorT<T> TensorT<T>::zeros(std::vector<std::int64_t> shape, bool requires_grad) {
  return full(std::move(shape), T(0), requires_grad);
}

template <typename T>
TensorT<T> TensorT<T>::full(std::vector<std::int64_t> shape, T value, bool requires_grad) {
  auto impl = std::make_shared<detail::TensorImpl<T>>();
  std::int64_t n = shape_product<T>(shape);
  impl->shape = std::move(shape);
  impl->data.assign(static_cast<std::size_t>(n), value);
  impl->requires_grad = requires_grad;
  return wrap(std::move(impl));
}

template <typename T>
TensorT<T> TensorT<T>::from_vector(std::vector<std::int64_t> shape, std::vector<T> values,
                                   bool requires_grad) {
  std::int64_t n = shape_product<T>(shape);
  if (n != static_cast<std::int64_t>(values.size())) {
    throw ValidationError("from_vector: shape does not match value count");
  }
  auto impl = std::make_shared<detail::TensorImpl<T>>();
  impl->shape = std::move(shape);
  impl->data = std::move(values);
  impl->requires_grad = requires_grad;
  return wrap(std::move(impl));
}

template <typename T>
TensorT<T> TensorT<T>::scalar(T value, bool requires_grad) {
  return from_vector({1}, {value}, requires_grad);
}

template <typename T>
T TensorT<T>::item() const {
  if (numel() != 1) throw ValidationError("item: tensor is not a scalar");
  return impl_->data[0];
}

template <typename T>
void TensorT<T>::backward() {
  if (numel() != 1) throw ValidationError("backward: loss must be scalar");

  // Post-order DFS over parents, iterative to keep deep graphs safe.
  std::vector<detail::TensorImpl<T>*> order;
  std::unordered_set<detail::TensorImpl<T>*> visited;
  std::vector<std::pair<detail::TensorImpl<T>*, std::size_t>> stack;
  stack.emplace_back(impl_.get(), 0);
  visited.insert(impl_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::TensorImpl<T>* p = node->parents[next].get();
      next++;
      if (visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  // Interior nodes are per-sweep scratch; only leaves accumulate across calls.
  for (auto* node : order) {
    if (node->backward_fn) node->grad.assign(node->data.size(), T(0));
  }

  impl_->ensure_grad();
  impl_->grad[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward_fn) (*it)->backward_fn();
  }
}

template <typename T>
TensorT<T> TensorT<T>::detach() const {
  auto impl = std::make_shared<detail::TensorImpl<T>>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  impl->requires_grad = false;
  return wrap(std::move(impl));
}

template class TensorT<float>;
template class TensorT<double>;

}  // namespace grad
}  // namespace srak
