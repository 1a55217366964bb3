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

#ifndef KFLOW_PIPELINE_COMMANDS_HPP_
#define KFLOW_PIPELINE_COMMANDS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "kflow/pipeline/config.hpp"
#include "kflow/pipeline/experiment.hpp"
#include "kflow/pipeline/sweep.hpp"

// File-level commands behind the kflow tool. Each writes into `out` and
// returns what it wrote; errors surface as kflow exceptions.
namespace kflow::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitConfig = 3;

// out/realization_<r>/ holds one series per realization, out/run.json the
// config echo and the digest of every series manifest.
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out);

// Writes trajectory.csv, estimate.json and the final filter state
// (filter_state.json with x and L_X as KFE1 fields). Refuses series that do
// not match the config's grid, measurement instants or innovation kind.
EstimateOutcome cmd_estimate(const ExperimentConfig& config, const std::filesystem::path& series,
                             const std::filesystem::path& out);

// Reads the parameter values from an estimate.json.
Eigen::VectorXd read_estimate(const std::filesystem::path& estimate_json, const std::vector<std::string>& names);

// Writes report.json.
ErrorReport cmd_evaluate(const ExperimentConfig& config, const std::filesystem::path& series,
                         const Eigen::VectorXd& theta, const std::filesystem::path& out);

struct MaskReport {
  double target_R = 1.0;
  double achieved_R = 1.0;
  std::size_t selected = 0;
  std::size_t in_plane_selected = 0;
  double mean_selected_radius = 0.0;
  double uniform_mean_radius = 0.0;  // mean |k| over the whole kx-ky lattice
};

MaskReport mask_report(const imaging::SamplingMask& mask);

// Writes mask.kfe, mask.pgm and mask.json.
MaskReport cmd_mask(const imaging::VoxelGrid& grid, const MaskSpec& spec, const std::filesystem::path& out);

// Writes sweep.csv.
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config, const SweepSpec& spec,
                                const std::filesystem::path& out);

}  // namespace kflow::pipeline

#endif  // KFLOW_PIPELINE_COMMANDS_HPP_
