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

#include <limits>

#include "kflow/pipeline/config.hpp"
#include "kflow/pipeline/experiment.hpp"
#include "kflow/roukf/innovation.hpp"

namespace kp = kflow::pipeline;

namespace {

// Surrogate twin estimation end to end, per innovation kind.
void BM_SurrogateEstimate(benchmark::State& state) {
  auto cfg = kp::load_config(std::string(KFLOW_SOURCE_DIR) + "/configs/surrogate_twin.json");
  cfg.acquisition.snr = std::numeric_limits<double>::infinity();
  cfg.filter.innovation = state.range(0) == 0 ? kflow::roukf::InnovationKind::KSpace
                                              : kflow::roukf::InnovationKind::Velocity;
  const auto ctx = kp::prepare(cfg);
  const auto archive = kp::acquire(cfg, ctx, 0);
  for (auto _ : state) benchmark::DoNotOptimize(kp::estimate(cfg, *ctx.model, archive));
  state.SetLabel(kflow::roukf::to_string(cfg.filter.innovation));
}
BENCHMARK(BM_SurrogateEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
