// core/src/grad/ops.cc

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

#include "srak/grad/ops.h"

#include <algorithm>
#include <cmath>
#include <memory>

namespace srak {
namespace grad {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename T>
using Impl = detail::TensorImpl<T>;

template <typename T>
std::shared_ptr<Impl<T>> new_node(std::vector<std::int64_t> shape,
                                  std::initializer_list<const TensorT<T>*> inputs) {
  auto node = std::make_shared<Impl<T>>();
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  node->shape = std::move(shape);
  node->data.resize(static_cast<std::size_t>(n));
  for (const auto* in : inputs) {
    if (in->requires_grad()) node->requires_grad = true;
  }
  if (node->requires_grad) {
    for (const auto* in : inputs) node->parents.push_back(in->impl_ptr());
  }
  return node;
}

template <typename T>
void check_same_shape(const TensorT<T>& a, const TensorT<T>& b, const char* op) {
  if (a.shape() != b.shape()) throw ValidationError(std::string(op) + ": shape mismatch");
}

// Eight-lane accumulators so reductions vectorize without reassociating a
// single dependency chain. The final combine order is fixed, so results stay
// deterministic.
template <typename T>
double dot_span(const T* a, const T* b, std::int64_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::int64_t t = 0;
  for (; t + 8 <= n; t += 8) {
    for (int j = 0; j < 8; j++) {
      acc[j] += static_cast<double>(a[t + j]) * static_cast<double>(b[t + j]);
    }
  }
  double s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; t < n; t++) s += static_cast<double>(a[t]) * static_cast<double>(b[t]);
  return s;
}

template <typename T>
double sum_span(const T* a, std::int64_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::int64_t t = 0;
  for (; t + 8 <= n; t += 8) {
    for (int j = 0; j < 8; j++) acc[j] += static_cast<double>(a[t + j]);
  }
  double s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; t < n; t++) s += static_cast<double>(a[t]);
  return s;
}

}  // namespace

template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b) {
  check_same_shape(a, b, "add");
  auto node = new_node<T>(a.shape(), {&a, &b});
  const T* pa = a.data();
  const T* pb = b.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = pa[i] + pb[i];
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* bi = b.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, bi, on, n]() {
      const T* g = on->grad.data();
      if (ai->requires_grad) {
        ai->ensure_grad();
        for (std::int64_t i = 0; i < n; i++) ai->grad[i] += g[i];
      }
      if (bi->requires_grad) {
        bi->ensure_grad();
        for (std::int64_t i = 0; i < n; i++) bi->grad[i] += g[i];
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> sub(const TensorT<T>& a, const TensorT<T>& b) {
  check_same_shape(a, b, "sub");
  auto node = new_node<T>(a.shape(), {&a, &b});
  const T* pa = a.data();
  const T* pb = b.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = pa[i] - pb[i];
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* bi = b.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, bi, on, n]() {
      const T* g = on->grad.data();
      if (ai->requires_grad) {
        ai->ensure_grad();
        for (std::int64_t i = 0; i < n; i++) ai->grad[i] += g[i];
      }
      if (bi->requires_grad) {
        bi->ensure_grad();
        for (std::int64_t i = 0; i < n; i++) bi->grad[i] -= g[i];
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> mul(const TensorT<T>& a, const TensorT<T>& b) {
  check_same_shape(a, b, "mul");
  auto node = new_node<T>(a.shape(), {&a, &b});
  const T* pa = a.data();
  const T* pb = b.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = pa[i] * pb[i];
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* bi = b.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, bi, on, n]() {
      const T* g = on->grad.data();
      if (ai->requires_grad) {
        ai->ensure_grad();
        for (std::int64_t i = 0; i < n; i++) ai->grad[i] += g[i] * bi->data[i];
      }
      if (bi->requires_grad) {
        bi->ensure_grad();
        for (std::int64_t i = 0; i < n; i++) bi->grad[i] += g[i] * ai->data[i];
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> add_scalar(const TensorT<T>& a, T c) {
  auto node = new_node<T>(a.shape(), {&a});
  const T* pa = a.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = pa[i] + c;
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, on, n]() {
      ai->ensure_grad();
      const T* g = on->grad.data();
      for (std::int64_t i = 0; i < n; i++) ai->grad[i] += g[i];
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> mul_scalar(const TensorT<T>& a, T c) {
  auto node = new_node<T>(a.shape(), {&a});
  const T* pa = a.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = pa[i] * c;
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, on, n, c]() {
      ai->ensure_grad();
      const T* g = on->grad.data();
      for (std::int64_t i = 0; i < n; i++) ai->grad[i] += g[i] * c;
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> absolute(const TensorT<T>& a) {
  auto node = new_node<T>(a.shape(), {&a});
  const T* pa = a.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = std::abs(pa[i]);
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, on, n]() {
      ai->ensure_grad();
      const T* g = on->grad.data();
      for (std::int64_t i = 0; i < n; i++) {
        T x = ai->data[i];
        if (x > 0) {
          ai->grad[i] += g[i];
        } else if (x < 0) {
          ai->grad[i] -= g[i];
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> log_clamped(const TensorT<T>& a, T floor_value) {
  if (floor_value <= 0) throw ValidationError("log_clamped: floor must be positive");
  auto node = new_node<T>(a.shape(), {&a});
  const T* pa = a.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) po[i] = std::log(std::max(pa[i], floor_value));
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, on, n, floor_value]() {
      ai->ensure_grad();
      const T* g = on->grad.data();
      for (std::int64_t i = 0; i < n; i++) {
        T x = ai->data[i];
        if (x > floor_value) ai->grad[i] += g[i] / x;
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> leaky_relu(const TensorT<T>& a, T slope) {
  auto node = new_node<T>(a.shape(), {&a});
  const T* pa = a.data();
  T* po = node->data.data();
  const std::int64_t n = a.numel();
  for (std::int64_t i = 0; i < n; i++) {
    T x = pa[i];
    po[i] = x >= 0 ? x : slope * x;
  }
  if (node->requires_grad) {
    Impl<T>* ai = a.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, on, n, slope]() {
      ai->ensure_grad();
      const T* g = on->grad.data();
      // subgradient at exactly 0 takes the positive branch
      for (std::int64_t i = 0; i < n; i++) {
        ai->grad[i] += ai->data[i] >= 0 ? g[i] : slope * g[i];
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> relu(const TensorT<T>& a) {
  return leaky_relu(a, T(0));
}

template <typename T>
TensorT<T> conv1d(const TensorT<T>& input, const TensorT<T>& kernel, const TensorT<T>& bias,
                  std::int64_t dilation, std::int64_t padding, std::int64_t stride) {
  if (input.rank() != 3 || kernel.rank() != 3 || bias.rank() != 1) {
    throw ValidationError("conv1d: want input [b,ci,len], kernel [co,ci,k], bias [co]");
  }
  const std::int64_t batch = input.dim(0), ci_n = input.dim(1), len = input.dim(2);
  const std::int64_t co_n = kernel.dim(0), k = kernel.dim(2);
  if (kernel.dim(1) != ci_n) throw ValidationError("conv1d: channel mismatch");
  if (bias.dim(0) != co_n) throw ValidationError("conv1d: bias size mismatch");
  if (k < 1 || dilation < 1 || stride < 1 || padding < 0) {
    throw ValidationError("conv1d: bad hyperparameters");
  }
  const std::int64_t span = (k - 1) * dilation + 1;
  if (len + 2 * padding < span) throw ValidationError("conv1d: input shorter than kernel span");
  const std::int64_t len_out = (len + 2 * padding - span) / stride + 1;

  auto node = new_node<T>({batch, co_n, len_out}, {&input, &kernel, &bias});
  const T* in = input.data();
  const T* w = kernel.data();
  const T* bs = bias.data();
  T* out = node->data.data();

  for (std::int64_t b = 0; b < batch; b++) {
    for (std::int64_t co = 0; co < co_n; co++) {
      T* orow = out + (b * co_n + co) * len_out;
      for (std::int64_t o = 0; o < len_out; o++) orow[o] = bs[co];
      for (std::int64_t ci = 0; ci < ci_n; ci++) {
        const T* irow = in + (b * ci_n + ci) * len;
        const T* wrow = w + (co * ci_n + ci) * k;
        for (std::int64_t kk = 0; kk < k; kk++) {
          const T wv = wrow[kk];
          const std::int64_t off = kk * dilation - padding;
          std::int64_t o_lo = off < 0 ? (-off + stride - 1) / stride : 0;
          std::int64_t o_hi = off > len - 1 ? -1 : (len - 1 - off) / stride;
          if (o_hi > len_out - 1) o_hi = len_out - 1;
          if (o_lo > o_hi) continue;
          if (stride == 1) {
            const T* src = irow + o_lo + off;
            T* dst = orow + o_lo;
            const std::int64_t m = o_hi - o_lo + 1;
            for (std::int64_t t = 0; t < m; t++) dst[t] += wv * src[t];
          } else {
            for (std::int64_t o = o_lo; o <= o_hi; o++) {
              orow[o] += wv * irow[o * stride + off];
            }
          }
        }
      }
    }
  }

  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* ki = kernel.impl();
    Impl<T>* bi = bias.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, ki, bi, on, batch, ci_n, co_n, len, len_out, k, dilation, padding,
                         stride]() {
      const T* g = on->grad.data();
      if (bi->requires_grad) {
        bi->ensure_grad();
        for (std::int64_t b = 0; b < batch; b++) {
          for (std::int64_t co = 0; co < co_n; co++) {
            const T* grow = g + (b * co_n + co) * len_out;
            T s = 0;
            for (std::int64_t o = 0; o < len_out; o++) s += grow[o];
            bi->grad[co] += s;
          }
        }
      }
      if (xi->requires_grad) xi->ensure_grad();
      if (ki->requires_grad) ki->ensure_grad();
      if (!xi->requires_grad && !ki->requires_grad) return;
      for (std::int64_t b = 0; b < batch; b++) {
        for (std::int64_t co = 0; co < co_n; co++) {
          const T* grow = g + (b * co_n + co) * len_out;
          for (std::int64_t ci = 0; ci < ci_n; ci++) {
            const T* irow = xi->data.data() + (b * ci_n + ci) * len;
            const T* wrow = ki->data.data() + (co * ci_n + ci) * k;
            T* girow = xi->requires_grad ? xi->grad.data() + (b * ci_n + ci) * len : nullptr;
            T* gwrow = ki->requires_grad ? ki->grad.data() + (co * ci_n + ci) * k : nullptr;
            for (std::int64_t kk = 0; kk < k; kk++) {
              const std::int64_t off = kk * dilation - padding;
              std::int64_t o_lo = off < 0 ? (-off + stride - 1) / stride : 0;
              std::int64_t o_hi = off > len - 1 ? -1 : (len - 1 - off) / stride;
              if (o_hi > len_out - 1) o_hi = len_out - 1;
              if (o_lo > o_hi) continue;
              const std::int64_t m = o_hi - o_lo + 1;
              if (girow != nullptr) {
                const T wv = wrow[kk];
                if (stride == 1) {
                  T* dst = girow + o_lo + off;
                  const T* src = grow + o_lo;
                  for (std::int64_t t = 0; t < m; t++) dst[t] += wv * src[t];
                } else {
                  for (std::int64_t o = o_lo; o <= o_hi; o++) {
                    girow[o * stride + off] += wv * grow[o];
                  }
                }
              }
              if (gwrow != nullptr) {
                double s = 0;
                if (stride == 1) {
                  s = dot_span(grow + o_lo, irow + o_lo + off, m);
                } else {
                  for (std::int64_t o = o_lo; o <= o_hi; o++) {
                    s += static_cast<double>(grow[o]) * irow[o * stride + off];
                  }
                }
                gwrow[kk] += static_cast<T>(s);
              }
            }
          }
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> batchnorm1d(const TensorT<T>& input, const TensorT<T>& gamma, const TensorT<T>& beta,
                       BatchNormStateT<T>* state, bool train, T momentum, T eps) {
  if (input.rank() != 3) throw ValidationError("batchnorm1d: expected [batch, ch, len]");
  const std::int64_t batch = input.dim(0), ch = input.dim(1), len = input.dim(2);
  if (gamma.rank() != 1 || gamma.dim(0) != ch || beta.rank() != 1 || beta.dim(0) != ch) {
    throw ValidationError("batchnorm1d: gamma/beta must be [ch]");
  }
  if (state == nullptr || static_cast<std::int64_t>(state->running_mean.size()) != ch ||
      static_cast<std::int64_t>(state->running_var.size()) != ch) {
    throw ValidationError("batchnorm1d: running state channel mismatch");
  }
  const std::int64_t n_stat = batch * len;
  if (train && n_stat < 2) throw ValidationError("batchnorm1d: train mode needs batch*len > 1");

  std::vector<T> mean(static_cast<std::size_t>(ch));
  std::vector<T> inv_std(static_cast<std::size_t>(ch));
  const T* in = input.data();
  if (train) {
    for (std::int64_t c = 0; c < ch; c++) {
      double s = 0, sq = 0;
      for (std::int64_t b = 0; b < batch; b++) {
        const T* row = in + (b * ch + c) * len;
        s += sum_span(row, len);
        sq += dot_span(row, row, len);
      }
      const double mu = s / static_cast<double>(n_stat);
      double var = sq / static_cast<double>(n_stat) - mu * mu;
      if (var < 0) var = 0;
      mean[c] = static_cast<T>(mu);
      inv_std[c] = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps)));
      const double var_unbiased = var * static_cast<double>(n_stat) / (n_stat - 1);
      state->running_mean[c] =
          (T(1) - momentum) * state->running_mean[c] + momentum * static_cast<T>(mu);
      state->running_var[c] =
          (T(1) - momentum) * state->running_var[c] + momentum * static_cast<T>(var_unbiased);
    }
  } else {
    for (std::int64_t c = 0; c < ch; c++) {
      mean[c] = state->running_mean[c];
      inv_std[c] = static_cast<T>(
          1.0 / std::sqrt(static_cast<double>(state->running_var[c]) + static_cast<double>(eps)));
    }
  }

  auto node = new_node<T>(input.shape(), {&input, &gamma, &beta});
  T* out = node->data.data();
  const T* gm = gamma.data();
  const T* bt = beta.data();
  for (std::int64_t b = 0; b < batch; b++) {
    for (std::int64_t c = 0; c < ch; c++) {
      const T* row = in + (b * ch + c) * len;
      T* orow = out + (b * ch + c) * len;
      const T mu = mean[c], is = inv_std[c], gmc = gm[c], btc = bt[c];
      for (std::int64_t i = 0; i < len; i++) orow[i] = gmc * (row[i] - mu) * is + btc;
    }
  }

  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* gi = gamma.impl();
    Impl<T>* bi = beta.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, gi, bi, on, batch, ch, len, train, mean, inv_std]() {
      const T* g = on->grad.data();
      const std::int64_t n_stat = batch * len;
      // per-channel sums of dy and dy*xhat
      std::vector<double> s1(static_cast<std::size_t>(ch), 0.0);
      std::vector<double> s2(static_cast<std::size_t>(ch), 0.0);
      for (std::int64_t b = 0; b < batch; b++) {
        for (std::int64_t c = 0; c < ch; c++) {
          const T* grow = g + (b * ch + c) * len;
          const T* row = xi->data.data() + (b * ch + c) * len;
          const double a1 = sum_span(grow, len);
          const double gx = dot_span(grow, row, len);
          s1[c] += a1;
          s2[c] += (gx - static_cast<double>(mean[c]) * a1) * static_cast<double>(inv_std[c]);
        }
      }
      if (bi->requires_grad) {
        bi->ensure_grad();
        for (std::int64_t c = 0; c < ch; c++) bi->grad[c] += static_cast<T>(s1[c]);
      }
      if (gi->requires_grad) {
        gi->ensure_grad();
        for (std::int64_t c = 0; c < ch; c++) gi->grad[c] += static_cast<T>(s2[c]);
      }
      if (xi->requires_grad) {
        xi->ensure_grad();
        for (std::int64_t b = 0; b < batch; b++) {
          for (std::int64_t c = 0; c < ch; c++) {
            const T* grow = g + (b * ch + c) * len;
            const T* row = xi->data.data() + (b * ch + c) * len;
            T* xrow = xi->grad.data() + (b * ch + c) * len;
            const T mu = mean[c], is = inv_std[c];
            const T scale = gi->data[c] * is;
            if (train) {
              const T m1 = static_cast<T>(s1[c] / n_stat);
              const T m2 = static_cast<T>(s2[c] / n_stat);
              for (std::int64_t i = 0; i < len; i++) {
                const T xhat = (row[i] - mu) * is;
                xrow[i] += scale * (grow[i] - m1 - xhat * m2);
              }
            } else {
              for (std::int64_t i = 0; i < len; i++) xrow[i] += scale * grow[i];
            }
          }
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> affine(const TensorT<T>& input, const TensorT<T>& weight, const TensorT<T>& bias) {
  if (input.rank() != 2 || weight.rank() != 2 || bias.rank() != 1) {
    throw ValidationError("affine: want input [b,n], weight [m,n], bias [m]");
  }
  const std::int64_t batch = input.dim(0), n = input.dim(1), m = weight.dim(0);
  if (weight.dim(1) != n || bias.dim(0) != m) throw ValidationError("affine: shape mismatch");

  auto node = new_node<T>({batch, m}, {&input, &weight, &bias});
  const T* x = input.data();
  const T* w = weight.data();
  const T* bs = bias.data();
  T* out = node->data.data();
  for (std::int64_t i = 0; i < batch; i++) {
    const T* xrow = x + i * n;
    for (std::int64_t j = 0; j < m; j++) {
      out[i * m + j] = static_cast<T>(dot_span(xrow, w + j * n, n)) + bs[j];
    }
  }

  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* wi = weight.impl();
    Impl<T>* bi = bias.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, wi, bi, on, batch, n, m]() {
      const T* g = on->grad.data();
      if (bi->requires_grad) {
        bi->ensure_grad();
        for (std::int64_t i = 0; i < batch; i++) {
          for (std::int64_t j = 0; j < m; j++) bi->grad[j] += g[i * m + j];
        }
      }
      if (xi->requires_grad) {
        xi->ensure_grad();
        for (std::int64_t i = 0; i < batch; i++) {
          T* xg = xi->grad.data() + i * n;
          for (std::int64_t j = 0; j < m; j++) {
            const T gv = g[i * m + j];
            const T* wrow = wi->data.data() + j * n;
            for (std::int64_t t = 0; t < n; t++) xg[t] += gv * wrow[t];
          }
        }
      }
      if (wi->requires_grad) {
        wi->ensure_grad();
        for (std::int64_t i = 0; i < batch; i++) {
          const T* xrow = xi->data.data() + i * n;
          for (std::int64_t j = 0; j < m; j++) {
            const T gv = g[i * m + j];
            T* wg = wi->grad.data() + j * n;
            for (std::int64_t t = 0; t < n; t++) wg[t] += gv * xrow[t];
          }
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> log_softmax(const TensorT<T>& input) {
  if (input.rank() != 2) throw ValidationError("log_softmax: expected [batch, classes]");
  const std::int64_t batch = input.dim(0), n = input.dim(1);
  if (n < 1) throw ValidationError("log_softmax: empty rows");
  auto node = new_node<T>(input.shape(), {&input});
  const T* x = input.data();
  T* out = node->data.data();
  for (std::int64_t i = 0; i < batch; i++) {
    const T* xrow = x + i * n;
    T* orow = out + i * n;
    T mx = xrow[0];
    for (std::int64_t j = 1; j < n; j++) mx = std::max(mx, xrow[j]);
    double z = 0;
    for (std::int64_t j = 0; j < n; j++) z += std::exp(static_cast<double>(xrow[j] - mx));
    const T lz = static_cast<T>(std::log(z));
    for (std::int64_t j = 0; j < n; j++) orow[j] = xrow[j] - mx - lz;
  }
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, n]() {
      xi->ensure_grad();
      const T* g = on->grad.data();
      const T* y = on->data.data();
      for (std::int64_t i = 0; i < batch; i++) {
        const T* grow = g + i * n;
        const T* yrow = y + i * n;
        T* xg = xi->grad.data() + i * n;
        double gs = 0;
        for (std::int64_t j = 0; j < n; j++) gs += grow[j];
        for (std::int64_t j = 0; j < n; j++) {
          xg[j] += grow[j] - static_cast<T>(gs) * std::exp(yrow[j]);
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> softmax(const TensorT<T>& input) {
  if (input.rank() != 2) throw ValidationError("softmax: expected [batch, classes]");
  const std::int64_t batch = input.dim(0), n = input.dim(1);
  if (n < 1) throw ValidationError("softmax: empty rows");
  auto node = new_node<T>(input.shape(), {&input});
  const T* x = input.data();
  T* out = node->data.data();
  for (std::int64_t i = 0; i < batch; i++) {
    const T* xrow = x + i * n;
    T* orow = out + i * n;
    T mx = xrow[0];
    for (std::int64_t j = 1; j < n; j++) mx = std::max(mx, xrow[j]);
    double z = 0;
    for (std::int64_t j = 0; j < n; j++) z += std::exp(static_cast<double>(xrow[j] - mx));
    for (std::int64_t j = 0; j < n; j++) {
      orow[j] = static_cast<T>(std::exp(static_cast<double>(xrow[j] - mx)) / z);
    }
  }
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, n]() {
      xi->ensure_grad();
      const T* g = on->grad.data();
      const T* p = on->data.data();
      for (std::int64_t i = 0; i < batch; i++) {
        const T* grow = g + i * n;
        const T* prow = p + i * n;
        T* xg = xi->grad.data() + i * n;
        double dot = 0;
        for (std::int64_t j = 0; j < n; j++) dot += static_cast<double>(grow[j]) * prow[j];
        for (std::int64_t j = 0; j < n; j++) {
          xg[j] += prow[j] * (grow[j] - static_cast<T>(dot));
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> maxpool1d(const TensorT<T>& input, std::int64_t pool) {
  if (input.rank() != 3) throw ValidationError("maxpool1d: expected [batch, ch, len]");
  if (pool < 1) throw ValidationError("maxpool1d: pool must be positive");
  const std::int64_t batch = input.dim(0), ch = input.dim(1), len = input.dim(2);
  const std::int64_t len_out = len / pool;
  if (len_out < 1) throw ValidationError("maxpool1d: input shorter than pool window");

  auto node = new_node<T>({batch, ch, len_out}, {&input});
  const T* x = input.data();
  T* out = node->data.data();
  std::vector<std::int64_t> winner(static_cast<std::size_t>(batch * ch * len_out));
  for (std::int64_t b = 0; b < batch; b++) {
    for (std::int64_t c = 0; c < ch; c++) {
      const T* row = x + (b * ch + c) * len;
      T* orow = out + (b * ch + c) * len_out;
      std::int64_t* wrow = winner.data() + (b * ch + c) * len_out;
      for (std::int64_t o = 0; o < len_out; o++) {
        std::int64_t base = o * pool;
        T best = row[base];
        std::int64_t bi = base;
        for (std::int64_t j = 1; j < pool; j++) {
          if (row[base + j] > best) {
            best = row[base + j];
            bi = base + j;
          }
        }
        orow[o] = best;
        wrow[o] = bi;
      }
    }
  }
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, ch, len, len_out, winner]() {
      xi->ensure_grad();
      const T* g = on->grad.data();
      for (std::int64_t b = 0; b < batch; b++) {
        for (std::int64_t c = 0; c < ch; c++) {
          const T* grow = g + (b * ch + c) * len_out;
          const std::int64_t* wrow = winner.data() + (b * ch + c) * len_out;
          T* xg = xi->grad.data() + (b * ch + c) * len;
          for (std::int64_t o = 0; o < len_out; o++) xg[wrow[o]] += grow[o];
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> reshape(const TensorT<T>& input, std::vector<std::int64_t> shape) {
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  if (n != input.numel()) throw ValidationError("reshape: element count mismatch");
  auto node = new_node<T>(std::move(shape), {&input});
  node->data = input.data_vector();
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, n]() {
      xi->ensure_grad();
      for (std::int64_t i = 0; i < n; i++) xi->grad[i] += on->grad[i];
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> reduce_sum(const TensorT<T>& input) {
  auto node = new_node<T>({1}, {&input});
  const T* x = input.data();
  const std::int64_t n = input.numel();
  double s = 0;
  for (std::int64_t i = 0; i < n; i++) s += x[i];
  node->data[0] = static_cast<T>(s);
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, n]() {
      xi->ensure_grad();
      const T g = on->grad[0];
      for (std::int64_t i = 0; i < n; i++) xi->grad[i] += g;
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> reduce_mean(const TensorT<T>& input) {
  const std::int64_t n = input.numel();
  if (n < 1) throw ValidationError("reduce_mean: empty input");
  auto node = new_node<T>({1}, {&input});
  const T* x = input.data();
  double s = 0;
  for (std::int64_t i = 0; i < n; i++) s += x[i];
  node->data[0] = static_cast<T>(s / static_cast<double>(n));
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, n]() {
      xi->ensure_grad();
      const T g = on->grad[0] / static_cast<T>(n);
      for (std::int64_t i = 0; i < n; i++) xi->grad[i] += g;
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> reduce_sum_rows(const TensorT<T>& input) {
  if (input.rank() != 2) throw ValidationError("reduce_sum_rows: expected [batch, n]");
  const std::int64_t batch = input.dim(0), n = input.dim(1);
  auto node = new_node<T>({batch}, {&input});
  const T* x = input.data();
  for (std::int64_t i = 0; i < batch; i++) {
    double s = 0;
    for (std::int64_t j = 0; j < n; j++) s += x[i * n + j];
    node->data[i] = static_cast<T>(s);
  }
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, n]() {
      xi->ensure_grad();
      for (std::int64_t i = 0; i < batch; i++) {
        const T g = on->grad[i];
        T* xg = xi->grad.data() + i * n;
        for (std::int64_t j = 0; j < n; j++) xg[j] += g;
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> reduce_max_rows(const TensorT<T>& input, std::vector<std::int64_t>* argmax) {
  if (input.rank() != 2) throw ValidationError("reduce_max_rows: expected [batch, n]");
  const std::int64_t batch = input.dim(0), n = input.dim(1);
  if (n < 1) throw ValidationError("reduce_max_rows: empty rows");
  auto node = new_node<T>({batch}, {&input});
  const T* x = input.data();
  std::vector<std::int64_t> win(static_cast<std::size_t>(batch));
  for (std::int64_t i = 0; i < batch; i++) {
    const T* row = x + i * n;
    std::int64_t bi = 0;
    for (std::int64_t j = 1; j < n; j++) {
      if (row[j] > row[bi]) bi = j;
    }
    node->data[i] = row[bi];
    win[i] = bi;
  }
  if (argmax != nullptr) *argmax = win;
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, n, win]() {
      xi->ensure_grad();
      for (std::int64_t i = 0; i < batch; i++) {
        xi->grad[i * n + win[i]] += on->grad[i];
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
void row_argmax_top2(const TensorT<T>& input, std::vector<std::int64_t>* first,
                     std::vector<std::int64_t>* second) {
  if (input.rank() != 2) throw ValidationError("row_argmax_top2: expected [batch, n]");
  const std::int64_t batch = input.dim(0), n = input.dim(1);
  if (n < 2) throw ValidationError("row_argmax_top2: need at least two classes");
  first->resize(static_cast<std::size_t>(batch));
  second->resize(static_cast<std::size_t>(batch));
  const T* x = input.data();
  for (std::int64_t i = 0; i < batch; i++) {
    const T* row = x + i * n;
    std::int64_t b1 = 0, b2 = -1;
    for (std::int64_t j = 1; j < n; j++) {
      if (row[j] > row[b1]) {
        b2 = b1;
        b1 = j;
      } else if (b2 < 0 || row[j] > row[b2]) {
        b2 = j;
      }
    }
    (*first)[i] = b1;
    (*second)[i] = b2;
  }
}

template <typename T>
TensorT<T> pick_rows(const TensorT<T>& input, const std::vector<std::int64_t>& index) {
  if (input.rank() != 2) throw ValidationError("pick_rows: expected [batch, n]");
  const std::int64_t batch = input.dim(0), n = input.dim(1);
  if (static_cast<std::int64_t>(index.size()) != batch) {
    throw ValidationError("pick_rows: one index per row required");
  }
  for (auto j : index) {
    if (j < 0 || j >= n) throw ValidationError("pick_rows: index out of range");
  }
  auto node = new_node<T>({batch}, {&input});
  const T* x = input.data();
  for (std::int64_t i = 0; i < batch; i++) node->data[i] = x[i * n + index[i]];
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, n, index]() {
      xi->ensure_grad();
      for (std::int64_t i = 0; i < batch; i++) {
        xi->grad[i * n + index[i]] += on->grad[i];
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> row_scale(const TensorT<T>& input, const std::vector<T>& scale) {
  if (input.rank() < 1) throw ValidationError("row_scale: rank must be >= 1");
  const std::int64_t batch = input.dim(0);
  if (static_cast<std::int64_t>(scale.size()) != batch) {
    throw ValidationError("row_scale: one scale per row required");
  }
  const std::int64_t inner = batch > 0 ? input.numel() / batch : 0;
  auto node = new_node<T>(input.shape(), {&input});
  const T* x = input.data();
  T* out = node->data.data();
  for (std::int64_t i = 0; i < batch; i++) {
    const T s = scale[i];
    for (std::int64_t j = 0; j < inner; j++) out[i * inner + j] = s * x[i * inner + j];
  }
  if (node->requires_grad) {
    Impl<T>* xi = input.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [xi, on, batch, inner, scale]() {
      xi->ensure_grad();
      for (std::int64_t i = 0; i < batch; i++) {
        const T s = scale[i];
        for (std::int64_t j = 0; j < inner; j++) {
          xi->grad[i * inner + j] += s * on->grad[i * inner + j];
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

template <typename T>
TensorT<T> sinc_bandpass(const TensorT<T>& f1_hz, const TensorT<T>& bw_hz, std::int64_t length,
                         T sample_rate, T min_hz) {
  if (f1_hz.rank() != 1 || bw_hz.rank() != 1 || f1_hz.dim(0) != bw_hz.dim(0)) {
    throw ValidationError("sinc_bandpass: f1 and bw must be [filters]");
  }
  if (length < 1 || length % 2 == 0) throw ValidationError("sinc_bandpass: length must be odd");
  if (sample_rate <= 0 || min_hz <= 0) throw ValidationError("sinc_bandpass: bad rates");
  const std::int64_t nf = f1_hz.dim(0);
  const std::int64_t half = (length - 1) / 2;
  const double fs = static_cast<double>(sample_rate);
  const double nyq = fs / 2.0;
  const double floor_hz = static_cast<double>(min_hz);

  std::vector<double> ham(static_cast<std::size_t>(length));
  for (std::int64_t j = 0; j < length; j++) {
    ham[j] = length > 1 ? 0.54 - 0.46 * std::cos(2.0 * kPi * j / (length - 1)) : 1.0;
  }

  // effective normalized edges plus clamp flags, kept for backward
  std::vector<double> fn1(static_cast<std::size_t>(nf)), fn2(static_cast<std::size_t>(nf));
  std::vector<char> clamp1(static_cast<std::size_t>(nf)), clamp2(static_cast<std::size_t>(nf));
  const T* f1 = f1_hz.data();
  const T* bw = bw_hz.data();
  for (std::int64_t i = 0; i < nf; i++) {
    double lo = std::abs(static_cast<double>(f1[i])) + floor_hz;
    clamp1[i] = lo > nyq - floor_hz;
    if (clamp1[i]) lo = nyq - floor_hz;
    double hi = lo + std::abs(static_cast<double>(bw[i])) + floor_hz;
    clamp2[i] = hi > nyq;
    if (clamp2[i]) hi = nyq;
    fn1[i] = lo / fs;
    fn2[i] = hi / fs;
  }

  auto node = new_node<T>({nf, 1, length}, {&f1_hz, &bw_hz});
  T* out = node->data.data();
  for (std::int64_t i = 0; i < nf; i++) {
    T* row = out + i * length;
    for (std::int64_t j = 0; j < length; j++) {
      const double n = static_cast<double>(j - half);
      double phi2, phi1;
      if (j == half) {
        phi2 = 2.0 * fn2[i];
        phi1 = 2.0 * fn1[i];
      } else {
        phi2 = std::sin(2.0 * kPi * fn2[i] * n) / (kPi * n);
        phi1 = std::sin(2.0 * kPi * fn1[i] * n) / (kPi * n);
      }
      row[j] = static_cast<T>(ham[j] * (phi2 - phi1));
    }
  }

  if (node->requires_grad) {
    Impl<T>* ai = f1_hz.impl();
    Impl<T>* bi = bw_hz.impl();
    Impl<T>* on = node.get();
    node->backward_fn = [ai, bi, on, nf, length, half, fs, ham, fn1, fn2, clamp1, clamp2]() {
      if (ai->requires_grad) ai->ensure_grad();
      if (bi->requires_grad) bi->ensure_grad();
      if (!ai->requires_grad && !bi->requires_grad) return;
      for (std::int64_t i = 0; i < nf; i++) {
        const T* grow = on->grad.data() + i * length;
        // d phi(f,n) / df = 2 cos(2 pi f n), valid at n = 0 as well
        double s1 = 0, s2 = 0;
        for (std::int64_t j = 0; j < length; j++) {
          const double n = static_cast<double>(j - half);
          const double gj = static_cast<double>(grow[j]) * ham[j];
          s2 += gj * 2.0 * std::cos(2.0 * kPi * fn2[i] * n);
          s1 += gj * 2.0 * std::cos(2.0 * kPi * fn1[i] * n);
        }
        const double d_hi = clamp2[i] ? 0.0 : s2 / fs;
        const double d_lo = -s1 / fs + d_hi;
        if (ai->requires_grad && !clamp1[i]) {
          const T v = ai->data[i];
          const double sgn = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
          ai->grad[i] += static_cast<T>(sgn * d_lo);
        }
        if (bi->requires_grad) {
          const T v = bi->data[i];
          const double sgn = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
          bi->grad[i] += static_cast<T>(sgn * d_hi);
        }
      }
    };
  }
  return TensorT<T>::wrap(node);
}

#define SRAK_INSTANTIATE_OPS(T)                                                                  \
  template TensorT<T> add(const TensorT<T>&, const TensorT<T>&);                                 \
  template TensorT<T> sub(const TensorT<T>&, const TensorT<T>&);                                 \
  template TensorT<T> mul(const TensorT<T>&, const TensorT<T>&);                                 \
  template TensorT<T> add_scalar(const TensorT<T>&, T);                                          \
  template TensorT<T> mul_scalar(const TensorT<T>&, T);                                          \
  template TensorT<T> absolute(const TensorT<T>&);                                               \
  template TensorT<T> log_clamped(const TensorT<T>&, T);                                         \
  template TensorT<T> leaky_relu(const TensorT<T>&, T);                                          \
  template TensorT<T> relu(const TensorT<T>&);                                                   \
  template TensorT<T> conv1d(const TensorT<T>&, const TensorT<T>&, const TensorT<T>&,            \
                             std::int64_t, std::int64_t, std::int64_t);                          \
  template TensorT<T> batchnorm1d(const TensorT<T>&, const TensorT<T>&, const TensorT<T>&,       \
                                  BatchNormStateT<T>*, bool, T, T);                              \
  template TensorT<T> affine(const TensorT<T>&, const TensorT<T>&, const TensorT<T>&);           \
  template TensorT<T> log_softmax(const TensorT<T>&);                                            \
  template TensorT<T> softmax(const TensorT<T>&);                                                \
  template TensorT<T> maxpool1d(const TensorT<T>&, std::int64_t);                                \
  template TensorT<T> reshape(const TensorT<T>&, std::vector<std::int64_t>);                     \
  template TensorT<T> reduce_sum(const TensorT<T>&);                                             \
  template TensorT<T> reduce_mean(const TensorT<T>&);                                            \
  template TensorT<T> reduce_sum_rows(const TensorT<T>&);                                        \
  template TensorT<T> reduce_max_rows(const TensorT<T>&, std::vector<std::int64_t>*);            \
  template void row_argmax_top2(const TensorT<T>&, std::vector<std::int64_t>*,                   \
                                std::vector<std::int64_t>*);                                     \
  template TensorT<T> pick_rows(const TensorT<T>&, const std::vector<std::int64_t>&);            \
  template TensorT<T> row_scale(const TensorT<T>&, const std::vector<T>&);                       \
  template TensorT<T> sinc_bandpass(const TensorT<T>&, const TensorT<T>&, std::int64_t, T, T);

SRAK_INSTANTIATE_OPS(float)
SRAK_INSTANTIATE_OPS(double)

#undef SRAK_INSTANTIATE_OPS

}  // namespace grad
}  // namespace srak
