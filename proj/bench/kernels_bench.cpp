/*
   Copyright 2026 The layoutsearch Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "layoutsearch/kernels.hpp"
#include "layoutsearch/random.hpp"

namespace {

namespace k = layoutsearch::kernels;

template <typename T>
std::vector<T> random_values(std::size_t n, std::uint64_t seed) {
  layoutsearch::Rng rng(seed);
  std::vector<T> v(n);
  for (T& x : v) x = static_cast<T>(rng.uniform(-1.0, 1.0));
  return v;
}

// Args: channels in, channels out, spatial size.
k::ConvShape conv_shape(const benchmark::State& state) {
  k::ConvShape s;
  s.in_channels = static_cast<std::size_t>(state.range(0));
  s.out_channels = static_cast<std::size_t>(state.range(1));
  s.height = s.width = static_cast<std::size_t>(state.range(2));
  return s;
}

template <auto Forward>
void BM_ConvForward(benchmark::State& state) {
  const k::ConvShape s = conv_shape(state);
  const auto in = random_values<double>(s.input_size(), 1);
  const auto w = random_values<double>(s.weight_size(), 2);
  const auto b = random_values<double>(s.out_channels, 3);
  std::vector<double> out(s.output_size());
  for (auto _ : state) {
    Forward(s, in, w, b, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.output_size() * s.in_channels * 9));
}

template <auto Backward>
void BM_ConvBackward(benchmark::State& state) {
  const k::ConvShape s = conv_shape(state);
  const auto in = random_values<double>(s.input_size(), 1);
  const auto w = random_values<double>(s.weight_size(), 2);
  const auto gout = random_values<double>(s.output_size(), 3);
  std::vector<double> gin(s.input_size()), gw(s.weight_size()), gb(s.out_channels);
  for (auto _ : state) {
    Backward(s, in, w, gout, gin, gw, gb);
    benchmark::DoNotOptimize(gin.data());
    benchmark::DoNotOptimize(gw.data());
  }
}

// Args: rows, dimension.
template <auto Distances>
void BM_Distances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const auto rows = random_values<float>(n * d, 4);
  const auto query = random_values<float>(d, 5);
  std::vector<double> out(n);
  for (auto _ : state) {
    Distances(rows, d, query, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}

void conv_args(benchmark::internal::Benchmark* b) {
  b->Args({3, 8, 256})->Args({8, 16, 128})->Args({16, 32, 32})->Args({3, 8, 64});
}

void distance_args(benchmark::internal::Benchmark* b) { b->Args({300, 8256})->Args({4543, 8256}); }

BENCHMARK(BM_ConvForward<k::reference::conv2d_forward>)->Name("conv_forward/reference")->Apply(conv_args);
BENCHMARK(BM_ConvForward<k::parallel::conv2d_forward>)->Name("conv_forward/parallel")->Apply(conv_args);
BENCHMARK(BM_ConvBackward<k::reference::conv2d_backward>)->Name("conv_backward/reference")->Apply(conv_args);
BENCHMARK(BM_ConvBackward<k::parallel::conv2d_backward>)->Name("conv_backward/parallel")->Apply(conv_args);
BENCHMARK(BM_Distances<k::reference::squared_distances>)->Name("distances/reference")->Apply(distance_args);
BENCHMARK(BM_Distances<k::parallel::squared_distances>)->Name("distances/parallel")->Apply(distance_args);

}  // namespace

BENCHMARK_MAIN();
