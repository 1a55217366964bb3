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

#ifndef KFLOW_PIPELINE_EXPERIMENT_HPP_
#define KFLOW_PIPELINE_EXPERIMENT_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kflow/forward/flow_model.hpp"
#include "kflow/pipeline/config.hpp"
#include "kflow/pipeline/series.hpp"
#include "kflow/roukf/estimation.hpp"

namespace kflow::pipeline {

std::unique_ptr<forward::FlowModel> build_model(const ExperimentConfig& config);
imaging::VoxelGrid build_grid(const ExperimentConfig& config, const forward::FlowModel& model);
imaging::SamplingMask build_mask(const imaging::VoxelGrid& grid, const MaskSpec& spec);

// Forward run from rest, advancing between consecutive instants in one call
// each so that re-runs with equal parameters are bit-identical.
std::vector<Eigen::VectorXd> simulate_samples(const forward::FlowModel& model,
                                              const forward::ModelParameters& params,
                                              const std::vector<double>& times);

// Relative error of stacked velocity samples, ||ref - recon|| / ||ref||.
double trajectory_error(const std::vector<Eigen::VectorXd>& reference,
                        const std::vector<Eigen::VectorXd>& recon);

// Truth run observed on the image grid.
struct ReferenceRun {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> samples;
  std::vector<std::vector<ScalarField>> velocity;  // [frame][direction]
  std::vector<std::uint8_t> lumen;
  double max_speed = 0.0;  // max |velocity component| over frames and directions
};

ReferenceRun simulate_reference(const forward::FlowModel& model, const ExperimentConfig& config,
                                const imaging::VoxelGrid& grid);

// Model, grid and reference run shared by every realization of a config.
struct ExperimentContext {
  std::unique_ptr<forward::FlowModel> model;
  imaging::VoxelGrid grid;
  ReferenceRun reference;
};

ExperimentContext prepare(const ExperimentConfig& config);

// Smooth receiver sensitivities centered around the geometry; a single coil
// is uniform.
std::vector<ScalarField> coil_sensitivities(const imaging::VoxelGrid& grid, int coils);

double resolve_venc(const ExperimentConfig& config, const ReferenceRun& reference);

// Seed of one noise draw. Frame 0 is the rest acquisition, frame n + 1 the
// n-th measurement.
std::uint64_t noise_seed(std::uint64_t seed, int realization, std::size_t frame, std::size_t direction,
                         std::size_t coil);

// Synthetic acquisition of one noise realization: encoding, optional noise,
// masking and, for velocity data, zero-filled reconstruction and phase
// decoding.
SeriesArchive acquire(const ExperimentConfig& config, const ExperimentContext& context, int realization);

// Measurement comparison used by the filter. The coil magnitudes and the noise
// std follow the config's magnitude_source and noise_std settings.
struct InnovationSetup {
  roukf::InnovationSpec spec;
  double noise_std_estimate = 0.0;  // mean over coils and directions; NaN when not estimated
};
InnovationSetup make_innovation(const ExperimentConfig& config, const SeriesArchive& archive);

struct EstimateOutcome {
  roukf::EstimationResult result;
  Eigen::VectorXd theta;     // physical
  Eigen::VectorXd variance;  // internal coordinates
  double noise_std_estimate = 0.0;
  double wall_time = 0.0;    // s
};

EstimateOutcome estimate(const ExperimentConfig& config, const forward::FlowModel& model,
                         const SeriesArchive& archive);

struct ErrorReport {
  double e = 0.0;
  std::vector<std::string> names;
  Eigen::VectorXd theta;
  Eigen::VectorXd variance;
  double achieved_R = 1.0;
  double noise_std_estimate = 0.0;
  double wall_time = 0.0;
  bool diverged = false;
  std::string failure;
};

// Re-runs the forward model with theta substituted for the named parameters
// and compares with the reference samples.
double evaluate_error(const ExperimentConfig& config, const forward::FlowModel& model,
                      const Eigen::VectorXd& theta, const std::vector<Eigen::VectorXd>& reference);

ErrorReport make_report(const ExperimentConfig& config, const forward::FlowModel& model,
                        const SeriesArchive& archive, const EstimateOutcome& outcome);

std::string report_to_json(const ErrorReport& report);

}  // namespace kflow::pipeline

#endif  // KFLOW_PIPELINE_EXPERIMENT_HPP_
