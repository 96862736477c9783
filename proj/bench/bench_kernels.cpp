// Copyright 2026 The seedcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "seedcomp/kernels/dense.hpp"
#include "seedcomp/kernels/neighbors.hpp"

namespace {

using namespace seedcomp::kernels;

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void BM_Knn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = uniform(3 * n, 1);
  for (auto _ : state) {
    auto t = Parallel ? parallel::knn(pts, pts, 16) : serial::knn(pts, pts, 16);
    benchmark::DoNotOptimize(t.indices.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_Fps(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = uniform(3 * n, 2);
  for (auto _ : state) {
    auto idx = Parallel ? parallel::farthest_point_sample(pts, n / 4, 0)
                        : serial::farthest_point_sample(pts, n / 4, 0);
    benchmark::DoNotOptimize(idx.data());
  }
}

template <bool Parallel>
void BM_Nearest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = uniform(3 * n, 3);
  const auto b = uniform(3 * n, 4);
  std::vector<std::size_t> index(n);
  std::vector<double> dist(n);
  for (auto _ : state) {
    if (Parallel) {
      parallel::nearest(a, b, index, dist);
    } else {
      serial::nearest(a, b, index, dist);
    }
    benchmark::DoNotOptimize(dist.data());
  }
}

template <bool Parallel>
void BM_LinearForward(benchmark::State& state) {
  const DenseDims d{static_cast<std::size_t>(state.range(0)), 128, 128};
  const auto x = uniform(d.rows * d.in, 5);
  const auto w = uniform(d.out * d.in, 6);
  const auto b = uniform(d.out, 7);
  std::vector<double> y(d.rows * d.out);
  for (auto _ : state) {
    if (Parallel) {
      parallel::linear_forward(x, w, b, d, y);
    } else {
      serial::linear_forward(x, w, b, d, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
}

BENCHMARK(BM_Knn<false>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Knn<true>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fps<false>)->Arg(8192)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fps<true>)->Arg(8192)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Nearest<false>)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Nearest<true>)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearForward<false>)->Arg(2048)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearForward<true>)->Arg(2048)->Arg(16384)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
