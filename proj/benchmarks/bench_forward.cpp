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

#include "kflow/forward/mesh_io.hpp"
#include "kflow/forward/navier_stokes.hpp"
#include "kflow/imaging/voxel_grid.hpp"

namespace fw = kflow::forward;

namespace {

fw::ModelParameters tube_params() {
  fw::ModelParameters p;
  p.inflow.kind = fw::PulseKind::Constant;
  p.inflow.U = 10.0;
  p.outlets = {fw::WindkesselParams{100.0, std::nullopt, std::nullopt}};
  return p;
}

void BM_NavierStokesStep(benchmark::State& state) {
  const auto mesh = fw::load_mesh(std::string(KFLOW_SOURCE_DIR) + "/meshes/" +
                                  (state.range(0) == 0 ? "tube.kmesh" : "y.kmesh"));
  fw::SolverConfig cfg;
  cfg.tau = 2e-3;
  const fw::NavierStokesModel m(mesh, fw::FluidProps{1.0, 0.5}, cfg);
  auto params = tube_params();
  params.outlets.resize(static_cast<std::size_t>(m.outlet_count()), params.outlets.front());
  const auto sys = m.pressure_system(params.outlets);
  auto s = m.zero_state();
  for (int j = 0; j < 20; ++j) s = m.step(s, params, *sys);
  for (auto _ : state) benchmark::DoNotOptimize(s = m.step(s, params, *sys));
  state.SetLabel(std::to_string(mesh.nodes.size()) + " nodes");
}
BENCHMARK(BM_NavierStokesStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ObserveVelocity(benchmark::State& state) {
  const auto mesh = fw::load_mesh(std::string(KFLOW_SOURCE_DIR) + "/meshes/tube.kmesh");
  const fw::NavierStokesModel m(mesh, fw::FluidProps{1.0, 0.5}, fw::SolverConfig{});
  const auto params = tube_params();
  const auto sys = m.pressure_system(params.outlets);
  auto s = m.zero_state();
  for (int j = 0; j < 20; ++j) s = m.step(s, params, *sys);
  const auto x = m.pack(s);
  const auto [lo, hi] = m.bounding_box();
  const double h = 0.25;
  const kflow::imaging::VoxelGrid grid(
      {static_cast<std::size_t>((hi.x() - lo.x()) / h) + 1, static_cast<std::size_t>((hi.y() - lo.y()) / h) + 1,
       static_cast<std::size_t>((hi.z() - lo.z()) / h) + 1},
      {h, h, h}, lo);
  m.observe_velocity(x, {0.0, 0.0, 1.0}, grid);  // builds the interpolation cache
  for (auto _ : state) benchmark::DoNotOptimize(m.observe_velocity(x, {0.0, 0.0, 1.0}, grid));
}
BENCHMARK(BM_ObserveVelocity)->Unit(benchmark::kMicrosecond);

}  // namespace
