// benchmarks/bench_engine.cc

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

#include <benchmark/benchmark.h>

#include "srak/common/rng.h"
#include "srak/grad/ops.h"
#include "srak/grad/tensor.h"

using namespace srak;
using namespace srak::grad;

namespace {

Tensor rand_f(Rng* rng, std::vector<std::int64_t> shape, bool rg) {
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  std::vector<float> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = static_cast<float>(rng->uniform(-1.0, 1.0));
  return Tensor::from_vector(std::move(shape), std::move(v), rg);
}

// The attacker's widest layer: 32ch -> 32ch, kernel 3, one 3200-sample frame
// per batch row.
void BM_Conv1dAttackerBlock(benchmark::State& state) {
  Rng rng(1);
  const std::int64_t batch = state.range(0);
  auto x = rand_f(&rng, {batch, 32, 3200}, false);
  auto w = rand_f(&rng, {32, 32, 3}, false);
  auto b = rand_f(&rng, {32}, false);
  for (auto _ : state) {
    auto y = conv1d(x, w, b, 2, 2, 1);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * batch * 32 * 32 * 3200 * 3);
}

void BM_Conv1dAttackerBlockBackward(benchmark::State& state) {
  Rng rng(2);
  const std::int64_t batch = state.range(0);
  auto x = rand_f(&rng, {batch, 32, 3200}, true);
  auto w = rand_f(&rng, {32, 32, 3}, true);
  auto b = rand_f(&rng, {32}, true);
  for (auto _ : state) {
    auto loss = reduce_sum(conv1d(x, w, b, 2, 2, 1));
    loss.backward();
    benchmark::DoNotOptimize(x.grad());
  }
  state.SetItemsProcessed(state.iterations() * batch * 32 * 32 * 3200 * 3);
}

// The classifier front end: 80 sinc filters of length 251 at stride 40.
void BM_Conv1dSincFrontEnd(benchmark::State& state) {
  Rng rng(3);
  const std::int64_t batch = state.range(0);
  auto x = rand_f(&rng, {batch, 1, 3200}, false);
  auto w = rand_f(&rng, {80, 1, 251}, false);
  auto b = rand_f(&rng, {80}, false);
  for (auto _ : state) {
    auto y = conv1d(x, w, b, 1, 125, 40);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * batch * 80 * 80 * 251);
}

void BM_SincBandpassKernel(benchmark::State& state) {
  Rng rng(4);
  std::vector<float> f1(80), bw(80);
  for (auto& v : f1) v = static_cast<float>(rng.uniform(100.0, 6000.0));
  for (auto& v : bw) v = static_cast<float>(rng.uniform(100.0, 2000.0));
  auto tf1 = Tensor::from_vector({80}, f1, false);
  auto tbw = Tensor::from_vector({80}, bw, false);
  for (auto _ : state) {
    auto k = sinc_bandpass(tf1, tbw, 251, 16000.0f, 50.0f);
    benchmark::DoNotOptimize(k.data());
  }
}

void BM_BatchNormTrain(benchmark::State& state) {
  Rng rng(5);
  const std::int64_t batch = state.range(0);
  auto x = rand_f(&rng, {batch, 32, 3200}, false);
  auto gm = Tensor::full({32}, 1.0f);
  auto bt = Tensor::zeros({32});
  BatchNormState st(32);
  for (auto _ : state) {
    auto y = batchnorm1d(x, gm, bt, &st, true);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_Conv1dAttackerBlock)->Arg(1)->Arg(64);
BENCHMARK(BM_Conv1dAttackerBlockBackward)->Arg(64);
BENCHMARK(BM_Conv1dSincFrontEnd)->Arg(1)->Arg(64);
BENCHMARK(BM_SincBandpassKernel);
BENCHMARK(BM_BatchNormTrain)->Arg(64);

BENCHMARK_MAIN();
