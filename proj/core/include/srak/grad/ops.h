// core/include/srak/grad/ops.h

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

#ifndef SRAK_GRAD_OPS_H_
#define SRAK_GRAD_OPS_H_

#include <cstdint>
#include <vector>

#include "srak/grad/tensor.h"

namespace srak {
namespace grad {

// Exactly the kernels the networks need. No broadcasting beyond bias addition.

template <typename T>
struct BatchNormStateT {
  std::vector<T> running_mean;
  std::vector<T> running_var;

  explicit BatchNormStateT(std::int64_t channels = 0)
      : running_mean(static_cast<std::size_t>(channels), T(0)),
        running_var(static_cast<std::size_t>(channels), T(1)) {}
};

using BatchNormState = BatchNormStateT<float>;

// Elementwise, shapes must match exactly.
template <typename T>
TensorT<T> add(const TensorT<T>& a, const TensorT<T>& b);
template <typename T>
TensorT<T> sub(const TensorT<T>& a, const TensorT<T>& b);
template <typename T>
TensorT<T> mul(const TensorT<T>& a, const TensorT<T>& b);
template <typename T>
TensorT<T> add_scalar(const TensorT<T>& a, T c);
template <typename T>
TensorT<T> mul_scalar(const TensorT<T>& a, T c);
template <typename T>
TensorT<T> absolute(const TensorT<T>& a);

// log(max(a, floor_value)); gradient is 1/a above the floor, 0 below.
template <typename T>
TensorT<T> log_clamped(const TensorT<T>& a, T floor_value);

// max(x, slope*x); gradient at exactly 0 takes the x > 0 branch.
template <typename T>
TensorT<T> leaky_relu(const TensorT<T>& a, T slope);
template <typename T>
TensorT<T> relu(const TensorT<T>& a);

// Cross-correlation. input [batch, ch_in, len], kernel [ch_out, ch_in, k],
// bias [ch_out]. len_out = (len + 2*padding - (k-1)*dilation - 1) / stride + 1.
template <typename T>
TensorT<T> conv1d(const TensorT<T>& input, const TensorT<T>& kernel, const TensorT<T>& bias,
                  std::int64_t dilation, std::int64_t padding, std::int64_t stride = 1);

// input [batch, ch, len]; per-channel stats over (batch, len). Train mode
// normalizes by batch statistics and updates the running ones; eval mode
// reads the running statistics and is still differentiable w.r.t. input.
template <typename T>
TensorT<T> batchnorm1d(const TensorT<T>& input, const TensorT<T>& gamma, const TensorT<T>& beta,
                       BatchNormStateT<T>* state, bool train, T momentum = T(0.1),
                       T eps = T(1e-5));

// input [batch, n], weight [m, n], bias [m] -> [batch, m].
template <typename T>
TensorT<T> affine(const TensorT<T>& input, const TensorT<T>& weight, const TensorT<T>& bias);

// Row-wise over [batch, classes].
template <typename T>
TensorT<T> log_softmax(const TensorT<T>& input);
template <typename T>
TensorT<T> softmax(const TensorT<T>& input);

// input [batch, ch, len] -> [batch, ch, len/pool]; ties take the earliest.
template <typename T>
TensorT<T> maxpool1d(const TensorT<T>& input, std::int64_t pool);

template <typename T>
TensorT<T> reshape(const TensorT<T>& input, std::vector<std::int64_t> shape);

// Full reductions to a scalar.
template <typename T>
TensorT<T> reduce_sum(const TensorT<T>& input);
template <typename T>
TensorT<T> reduce_mean(const TensorT<T>& input);

// [batch, n] -> [batch].
template <typename T>
TensorT<T> reduce_sum_rows(const TensorT<T>& input);

// Row max with gradient routed to the winner; ties break to the lowest index.
template <typename T>
TensorT<T> reduce_max_rows(const TensorT<T>& input, std::vector<std::int64_t>* argmax);

// Value-only top-two indices per row (no graph). Realizes I_1st / I_2nd.
template <typename T>
void row_argmax_top2(const TensorT<T>& input, std::vector<std::int64_t>* first,
                     std::vector<std::int64_t>* second);

// One element per row, gradient scattered back. [batch, n] -> [batch].
template <typename T>
TensorT<T> pick_rows(const TensorT<T>& input, const std::vector<std::int64_t>& index);

// Multiply row i of the input by the constant scale[i].
template <typename T>
TensorT<T> row_scale(const TensorT<T>& input, const std::vector<T>& scale);

// Hamming-windowed difference-of-sinc band-pass bank -> [filters, 1, length].
// f1' = |f1| + min_hz, f2' = f1' + |bw| + min_hz, both held below Nyquist.
// Differentiable w.r.t. f1 and bw (in Hz); clamped edges get zero gradient.
template <typename T>
TensorT<T> sinc_bandpass(const TensorT<T>& f1_hz, const TensorT<T>& bw_hz, std::int64_t length,
                         T sample_rate, T min_hz);

}  // namespace grad
}  // namespace srak

#endif  // SRAK_GRAD_OPS_H_
