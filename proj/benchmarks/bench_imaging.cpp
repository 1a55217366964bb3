// Copyright 2026 The kflow Authors
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

#include "kflow/imaging/acquisition.hpp"
#include "kflow/imaging/encoding.hpp"
#include "kflow/imaging/fourier.hpp"
#include "kflow/imaging/sampling_mask.hpp"

namespace im = kflow::imaging;

namespace {

im::ComplexField random_field(const im::VoxelGrid& g) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  im::ComplexField x(g);
  for (std::size_t i = 0; i < g.size(); ++i) x[i] = {n(rng), n(rng)};
  return x;
}

im::VoxelGrid cube(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  return im::VoxelGrid({n, n, n});
}

void BM_Dft3(benchmark::State& state) {
  const auto x = random_field(cube(state));
  for (auto _ : state) benchmark::DoNotOptimize(im::dft3(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.grid.size()));
}
BENCHMARK(BM_Dft3)->Arg(16)->Arg(32)->Arg(64);

void BM_Idft3(benchmark::State& state) {
  const auto x = random_field(cube(state));
  for (auto _ : state) benchmark::DoNotOptimize(im::idft3(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.grid.size()));
}
BENCHMARK(BM_Idft3)->Arg(16)->Arg(32)->Arg(64);

void BM_SimulateKSpace(benchmark::State& state) {
  const auto g = cube(state);
  const im::ScalarField M(g, 1.0), u(g, 20.0), phi(g, 0.075);
  const auto mask = im::make_gaussian_mask(g, 8.0, im::kDefaultGaussianSigmaFrac, 1);
  const auto m = im::encode_magnetization(M, u, phi, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(im::simulate_kspace(m, mask, 0.5, 7));
}
BENCHMARK(BM_SimulateKSpace)->Arg(16)->Arg(32);

void BM_GaussianMask(benchmark::State& state) {
  const im::VoxelGrid g({static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)), 1});
  for (auto _ : state) benchmark::DoNotOptimize(im::make_gaussian_mask(g, 8.0, im::kDefaultGaussianSigmaFrac, 3));
}
BENCHMARK(BM_GaussianMask)->Arg(64)->Arg(256);

}  // namespace
