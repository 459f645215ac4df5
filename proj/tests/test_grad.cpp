// tests/test_grad.cpp

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "grad_check.h"
#include "srak/common/error.h"
#include "srak/common/rng.h"
#include "srak/grad/adam.h"
#include "srak/grad/ops.h"
#include "srak/grad/tensor.h"

using namespace srak;
using namespace srak::grad;

namespace {

// Independent nested-loop cross-correlation, the oracle for conv1d.
std::vector<double> naive_conv1d(const std::vector<double>& in, std::int64_t batch,
                                 std::int64_t ci_n, std::int64_t len,
                                 const std::vector<double>& w, std::int64_t co_n, std::int64_t k,
                                 const std::vector<double>& bias, std::int64_t dil,
                                 std::int64_t pad, std::int64_t stride) {
  const std::int64_t len_out = (len + 2 * pad - ((k - 1) * dil + 1)) / stride + 1;
  std::vector<double> out(static_cast<std::size_t>(batch * co_n * len_out), 0.0);
  for (std::int64_t b = 0; b < batch; b++) {
    for (std::int64_t co = 0; co < co_n; co++) {
      for (std::int64_t o = 0; o < len_out; o++) {
        double s = bias[static_cast<std::size_t>(co)];
        for (std::int64_t ci = 0; ci < ci_n; ci++) {
          for (std::int64_t kk = 0; kk < k; kk++) {
            const std::int64_t pos = o * stride + kk * dil - pad;
            if (pos >= 0 && pos < len) {
              s += w[static_cast<std::size_t>((co * ci_n + ci) * k + kk)] *
                   in[static_cast<std::size_t>((b * ci_n + ci) * len + pos)];
            }
          }
        }
        out[static_cast<std::size_t>((b * co_n + co) * len_out + o)] = s;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("square function gradient") {
  auto x = TensorD::scalar(3.0, true);
  auto y = mul(x, x);
  y.backward();
  CHECK(y.item() == 9.0);
  CHECK(x.grad()[0] == doctest::Approx(6.0));
}

TEST_CASE("x plus x counts both paths") {
  auto x = TensorD::scalar(1.5, true);
  auto y = add(x, x);
  y.backward();
  CHECK(x.grad()[0] == doctest::Approx(2.0));
}

TEST_CASE("repeated backward accumulates") {
  auto x = TensorD::scalar(3.0, true);
  auto y = mul(x, x);
  y.backward();
  y.backward();
  CHECK(x.grad()[0] == doctest::Approx(12.0));
}

TEST_CASE("backward requires scalar loss") {
  auto x = TensorD::from_vector({2}, {1.0, 2.0}, true);
  auto y = add(x, x);
  CHECK_THROWS_AS(y.backward(), ValidationError);
}

TEST_CASE("frozen tensors receive no grad") {
  auto x = TensorD::scalar(2.0, true);
  auto w = TensorD::scalar(5.0, false);
  auto y = mul(x, w);
  y.backward();
  CHECK(x.grad()[0] == doctest::Approx(5.0));
  CHECK_FALSE(w.has_grad());
}

TEST_CASE("no inputs requiring grad records nothing") {
  auto x = TensorD::scalar(2.0, false);
  auto y = mul(x, x);
  CHECK_FALSE(y.requires_grad());
  CHECK(y.impl()->parents.empty());
}

TEST_CASE("detach cuts history") {
  auto x = TensorD::scalar(2.0, true);
  auto y = mul(x, x).detach();
  CHECK(y.item() == 4.0);
  CHECK_FALSE(y.requires_grad());
}

TEST_CASE("relu subgradient at zero is one") {
  auto x = TensorD::from_vector({3}, {-1.0, 0.0, 2.0}, true);
  auto y = reduce_sum(relu(x));
  y.backward();
  CHECK(x.grad()[0] == 0.0);
  CHECK(x.grad()[1] == 1.0);
  CHECK(x.grad()[2] == 1.0);
}

TEST_CASE("relu and leaky values") {
  auto x = TensorD::from_vector({2}, {-1.0, 2.0}, false);
  auto r = relu(x);
  CHECK(r.data()[0] == 0.0);
  CHECK(r.data()[1] == 2.0);
  auto l = leaky_relu(x, 0.2);
  CHECK(l.data()[0] == doctest::Approx(-0.2));
  CHECK(l.data()[1] == 2.0);
}

TEST_CASE("log_clamped floors value and kills grad below floor") {
  auto x = TensorD::from_vector({2}, {0.5, 1e-12}, true);
  auto y = reduce_sum(log_clamped(x, 1e-8));
  CHECK(y.item() == doctest::Approx(std::log(0.5) + std::log(1e-8)));
  y.backward();
  CHECK(x.grad()[0] == doctest::Approx(2.0));
  CHECK(x.grad()[1] == 0.0);
}

TEST_CASE("conv1d worked example") {
  auto x = TensorD::from_vector({1, 1, 3}, {1.0, 2.0, 3.0}, false);
  auto w = TensorD::from_vector({1, 1, 3}, {1.0, 0.0, -1.0}, false);
  auto b = TensorD::zeros({1});
  auto y = conv1d(x, w, b, 1, 1, 1);
  REQUIRE(y.numel() == 3);
  CHECK(y.data()[0] == doctest::Approx(-2.0));
  CHECK(y.data()[1] == doctest::Approx(-2.0));
  CHECK(y.data()[2] == doctest::Approx(2.0));
}

TEST_CASE("conv1d identity kernel") {
  Rng rng(5);
  auto x = testing::rand_tensor(&rng, {2, 1, 9}, -1.0, 1.0, false);
  auto w = TensorD::from_vector({1, 1, 3}, {0.0, 1.0, 0.0}, false);
  auto b = TensorD::zeros({1});
  auto y = conv1d(x, w, b, 1, 1, 1);
  REQUIRE(y.numel() == x.numel());
  for (std::int64_t i = 0; i < x.numel(); i++) CHECK(y.data()[i] == x.data()[i]);
}

TEST_CASE("conv1d same-length contract at dilation 2") {
  auto x = TensorD::zeros({1, 1, 17});
  auto w = TensorD::zeros({1, 1, 3});
  auto b = TensorD::zeros({1});
  auto y = conv1d(x, w, b, 2, 2, 1);
  CHECK(y.dim(2) == 17);
}

TEST_CASE("conv1d matches the naive oracle over random configs") {
  Rng rng(99);
  for (int trial = 0; trial < 30; trial++) {
    const std::int64_t batch = rng.uniform_int(1, 3);
    const std::int64_t ci = rng.uniform_int(1, 4);
    const std::int64_t co = rng.uniform_int(1, 4);
    const std::int64_t k = rng.uniform_int(1, 5);
    const std::int64_t dil = rng.uniform_int(1, 3);
    const std::int64_t pad = rng.uniform_int(0, 4);
    const std::int64_t stride = rng.uniform_int(1, 4);
    const std::int64_t span = (k - 1) * dil + 1;
    std::int64_t len = span - 2 * pad + rng.uniform_int(0, 12);
    if (len < 1) len = 1;
    if (len + 2 * pad < span) len = span - 2 * pad;
    auto x = testing::rand_tensor(&rng, {batch, ci, len}, -1.0, 1.0, false);
    auto w = testing::rand_tensor(&rng, {co, ci, k}, -1.0, 1.0, false);
    auto b = testing::rand_tensor(&rng, {co}, -0.5, 0.5, false);
    auto y = conv1d(x, w, b, dil, pad, stride);
    auto ref = naive_conv1d(x.data_vector(), batch, ci, len, w.data_vector(), co, k,
                            b.data_vector(), dil, pad, stride);
    REQUIRE(y.numel() == static_cast<std::int64_t>(ref.size()));
    for (std::int64_t i = 0; i < y.numel(); i++) {
      CHECK(y.data()[i] == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("conv1d rejects bad shapes") {
  auto x = TensorD::zeros({1, 2, 8});
  auto w = TensorD::zeros({3, 1, 3});  // channel mismatch
  auto b = TensorD::zeros({3});
  CHECK_THROWS_AS(conv1d(x, w, b, 1, 1, 1), ValidationError);
  auto w2 = TensorD::zeros({3, 2, 9});
  CHECK_THROWS_AS(conv1d(x, w2, b, 1, 0, 1), ValidationError);  // span exceeds input
}

TEST_CASE("batchnorm eval identity configuration") {
  Rng rng(11);
  auto x = testing::rand_tensor(&rng, {2, 3, 5}, -1.0, 1.0, false);
  auto gm = TensorD::full({3}, 1.0);
  auto bt = TensorD::zeros({3});
  BatchNormStateT<double> state(3);  // mean 0, var 1
  auto y = batchnorm1d(x, gm, bt, &state, false);
  for (std::int64_t i = 0; i < x.numel(); i++) {
    CHECK(y.data()[i] == doctest::Approx(x.data()[i]).epsilon(1e-4));
  }
}

TEST_CASE("batchnorm train output is standardized per channel") {
  Rng rng(12);
  const std::int64_t batch = 3, ch = 2, len = 50;
  auto x = testing::rand_tensor(&rng, {batch, ch, len}, -2.0, 3.0, false);
  auto gm = TensorD::full({ch}, 1.0);
  auto bt = TensorD::zeros({ch});
  BatchNormStateT<double> state(ch);
  auto y = batchnorm1d(x, gm, bt, &state, true);
  for (std::int64_t c = 0; c < ch; c++) {
    double s = 0, s2 = 0;
    for (std::int64_t b = 0; b < batch; b++) {
      for (std::int64_t i = 0; i < len; i++) {
        double v = y.data()[(b * ch + c) * len + i];
        s += v;
        s2 += v * v;
      }
    }
    const double n = batch * len;
    CHECK(s / n == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(s2 / n - (s / n) * (s / n) == doctest::Approx(1.0).epsilon(1e-3));
  }
  // running stats moved toward the batch stats
  CHECK(state.running_mean[0] != 0.0);
  CHECK(state.running_var[0] != 1.0);
}

TEST_CASE("batchnorm constant channel collapses to zero") {
  auto x = TensorD::full({2, 1, 4}, 3.7);
  auto gm = TensorD::full({1}, 1.0);
  auto bt = TensorD::zeros({1});
  BatchNormStateT<double> state(1);
  auto y = batchnorm1d(x, gm, bt, &state, true);
  for (std::int64_t i = 0; i < y.numel(); i++) {
    CHECK(y.data()[i] == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("batchnorm train mode needs more than one sample") {
  auto x = TensorD::zeros({1, 2, 1});
  auto gm = TensorD::full({2}, 1.0);
  auto bt = TensorD::zeros({2});
  BatchNormStateT<double> state(2);
  CHECK_THROWS_AS(batchnorm1d(x, gm, bt, &state, true), ValidationError);
}

TEST_CASE("affine worked examples") {
  auto x = TensorD::from_vector({1, 2}, {1.0, 2.0}, false);
  auto w = TensorD::from_vector({1, 2}, {3.0, 4.0}, false);
  auto b = TensorD::from_vector({1}, {5.0}, false);
  auto y = affine(x, w, b);
  CHECK(y.item() == doctest::Approx(16.0));

  auto id = TensorD::from_vector({2, 2}, {1.0, 0.0, 0.0, 1.0}, false);
  auto z = TensorD::zeros({2});
  auto x2 = TensorD::from_vector({2, 2}, {1.0, 2.0, 3.0, 4.0}, false);
  auto y2 = affine(x2, id, z);
  for (int i = 0; i < 4; i++) CHECK(y2.data()[i] == x2.data()[i]);
}

TEST_CASE("affine bias gradient equals batch count") {
  Rng rng(31);
  const std::int64_t batch = 5, n = 3, m = 2;
  auto x = testing::rand_tensor(&rng, {batch, n}, -1.0, 1.0, false);
  auto w = testing::rand_tensor(&rng, {m, n}, -1.0, 1.0, false);
  auto b = TensorD::zeros({m}, true);
  auto y = reduce_sum(affine(x, w, b));
  y.backward();
  for (std::int64_t j = 0; j < m; j++) {
    CHECK(b.grad()[j] == doctest::Approx(static_cast<double>(batch)));
  }
}

TEST_CASE("log_softmax examples") {
  auto x = TensorD::from_vector({1, 2}, {0.0, 0.0}, false);
  auto y = log_softmax(x);
  CHECK(y.data()[0] == doctest::Approx(-std::log(2.0)));
  CHECK(y.data()[1] == doctest::Approx(-std::log(2.0)));

  auto a = TensorD::from_vector({1, 3}, {0.3, -1.2, 0.8}, false);
  auto ac = add_scalar(a, 100.0);
  auto ya = log_softmax(a);
  auto yc = log_softmax(ac);
  for (int i = 0; i < 3; i++) CHECK(ya.data()[i] == doctest::Approx(yc.data()[i]).epsilon(1e-9));

  auto big = TensorD::from_vector({1, 2}, {1000.0, 0.0}, false);
  auto yb = log_softmax(big);
  CHECK(std::isfinite(yb.data()[0]));
  CHECK(std::isfinite(yb.data()[1]));
  CHECK(yb.data()[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(yb.data()[1] == doctest::Approx(-1000.0));
}

TEST_CASE("softmax rows sum to one") {
  Rng rng(17);
  auto x = testing::rand_tensor(&rng, {4, 7}, -3.0, 3.0, false);
  auto p = softmax(x);
  auto lp = log_softmax(x);
  for (std::int64_t i = 0; i < 4; i++) {
    double s = 0, se = 0;
    for (std::int64_t j = 0; j < 7; j++) {
      s += p.data()[i * 7 + j];
      se += std::exp(lp.data()[i * 7 + j]);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(se == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("reduce examples") {
  auto x = TensorD::from_vector({1, 3}, {1.0, 2.0, 3.0}, false);
  CHECK(reduce_mean(x).item() == doctest::Approx(2.0));

  std::vector<std::int64_t> am;
  auto mx = reduce_max_rows(TensorD::from_vector({1, 3}, {3.0, 3.0, 1.0}, false), &am);
  CHECK(mx.data()[0] == 3.0);
  CHECK(am[0] == 0);  // tie takes the lowest index

  auto xs = TensorD::from_vector({4}, {1.0, 2.0, 3.0, 4.0}, true);
  auto s = reduce_sum(xs);
  s.backward();
  for (int i = 0; i < 4; i++) CHECK(xs.grad()[i] == 1.0);
}

TEST_CASE("row_argmax_top2 tie rules") {
  auto x = TensorD::from_vector({2, 3}, {3.0, 3.0, 1.0, 1.0, 3.0, 3.0}, false);
  std::vector<std::int64_t> first, second;
  row_argmax_top2(x, &first, &second);
  CHECK(first[0] == 0);
  CHECK(second[0] == 1);
  CHECK(first[1] == 1);
  CHECK(second[1] == 2);
}

TEST_CASE("maxpool tie takes the earliest sample") {
  auto x = TensorD::from_vector({1, 1, 4}, {2.0, 2.0, 1.0, 0.0}, true);
  auto y = maxpool1d(x, 4);
  CHECK(y.item() == 2.0);
  reduce_sum(y).backward();
  CHECK(x.grad()[0] == 1.0);
  CHECK(x.grad()[1] == 0.0);
}

TEST_CASE("adam first step moves by about the learning rate") {
  for (double g : {0.5, -3.0, 100.0}) {
    auto p = TensorD::scalar(1.0, true);
    AdamT<double> opt({p}, 0.001);
    p.grad()[0] = g;
    opt.step();
    const double delta = 1.0 - p.item();
    CHECK(std::abs(delta) >= 0.99 * 0.001);
    CHECK(std::abs(delta) <= 0.001 + 1e-12);
    CHECK(delta * g > 0);  // moves against the gradient sign
    CHECK(opt.steps_taken() == 1);
  }
}

TEST_CASE("adam zero gradient leaves parameter and advances time") {
  auto p = TensorD::scalar(2.5, true);
  AdamT<double> opt({p}, 0.01);
  opt.step();  // grad never touched, treated as zero
  CHECK(p.item() == 2.5);
  CHECK(opt.steps_taken() == 1);
}

TEST_CASE("adam rejects non-finite gradients") {
  auto p = TensorD::scalar(1.0, true);
  AdamT<double> opt({p}, 0.01);
  p.grad()[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(opt.step(), NumericError);
  CHECK(opt.steps_taken() == 0);
  CHECK(p.item() == 1.0);
}

TEST_CASE("adam trajectories are deterministic") {
  auto run = [](std::uint64_t seed) {
    Rng rng(seed);
    auto p = TensorD::from_vector({4}, {1.0, -1.0, 0.5, 2.0}, true);
    AdamT<double> opt({p}, 0.01);
    for (int i = 0; i < 25; i++) {
      opt.zero_grad();
      for (int j = 0; j < 4; j++) p.grad()[j] = rng.uniform(-1.0, 1.0);
      opt.step();
    }
    return p.data_vector();
  };
  auto a = run(42);
  auto b = run(42);
  for (int j = 0; j < 4; j++) CHECK(a[j] == b[j]);
}

TEST_CASE("finite differences validate every primitive") {
  auto reports = testing::run_all_fd_suites(2026);
  for (const auto& rep : reports) {
    INFO(rep.op, " shapes=", rep.shapes, " checks=", rep.checks, " max_rel=", rep.max_rel);
    CHECK(rep.max_rel < 1e-4);
    CHECK(rep.checks > 0);
  }
}
