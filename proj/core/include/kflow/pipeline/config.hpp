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

#ifndef KFLOW_PIPELINE_CONFIG_HPP_
#define KFLOW_PIPELINE_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kflow/forward/flow_model.hpp"
#include "kflow/forward/navier_stokes.hpp"
#include "kflow/forward/surrogate.hpp"
#include "kflow/imaging/sampling_mask.hpp"
#include "kflow/roukf/innovation.hpp"
#include "kflow/roukf/parameters.hpp"

namespace kflow::pipeline {

using imaging::Vec3;

enum class ModelKind { Surrogate, NavierStokes };

struct ModelSpec {
  ModelKind kind = ModelKind::Surrogate;
  // Mesh file (.kmesh or .msh), resolved against the config directory, or
  // "builtin:tube" / "builtin:y" for the generated meshes.
  std::string mesh;
  double tau = 1e-3;
  forward::FluidProps fluid;
  forward::SolverConfig solver;  // solver.tau is overwritten by `tau`
  forward::SurrogateGeometry surrogate;
};

enum class VencPolicy { Absolute, Fraction };

// Where the estimator takes the coil magnitudes from.
enum class MagnitudeSource {
  True,          // the magnitude used to synthesize the data
  ZeroFilledR2,  // |zero-filled image| of the rest acquisition under a Gaussian R = 2 mask
  Constant,      // 0.5 everywhere
};

enum class NoiseStdSource { True, Estimated };

struct AcquisitionSpec {
  double spacing = 0.2;  // cm, isotropic voxels
  std::size_t padding = 2;
  // When set, the grid has these dimensions and is centered on the geometry.
  std::optional<std::array<std::size_t, 3>> dims;

  VencPolicy venc_policy = VencPolicy::Fraction;
  double venc = 2.0;  // cm/s for Absolute, multiple of max |u| for Fraction

  double snr = 15.0;  // +inf for noiseless data
  double dt_meas = 0.015;
  // Measurements are taken at n dt_meas for n = 1..floor(duration / dt_meas);
  // the duration defaults to one inflow cycle.
  std::optional<double> duration;
  std::vector<Vec3> directions{Vec3(0.0, 0.0, 1.0)};
  int coils = 1;

  double lumen_magnitude = 1.0;
  double background_magnitude = 0.5;
  double phi_back = 7.5e-2;  // rad, constant

  MagnitudeSource magnitude_source = MagnitudeSource::True;
  NoiseStdSource noise_std = NoiseStdSource::True;
};

struct MaskSpec {
  imaging::MaskPattern pattern = imaging::MaskPattern::Full;
  double R = 1.0;
  std::uint64_t seed = 1;
  double sigma_frac = imaging::kDefaultGaussianSigmaFrac;
  int turns = 6;
};

struct PriorSpec {
  roukf::ParameterSet parameters;  // names bind to U, Rp_k, Rd_k, C_k (k from 1)
};

struct FilterSpec {
  roukf::InnovationKind innovation = roukf::InnovationKind::KSpace;
  std::size_t skip_first = 0;
  int threads = 1;
  // Noiseless data carries no noise level; the filter then weighs the
  // innovation as if the data had this SNR.
  double assumed_snr = 15.0;
};

struct ExperimentConfig {
  ModelSpec model;
  forward::ModelParameters truth;
  PriorSpec prior;
  AcquisitionSpec acquisition;
  MaskSpec mask;
  FilterSpec filter;
  std::uint64_t seed = 1;
  int realizations = 1;
  std::string output = "out";
  std::filesystem::path base_dir;  // directory relative paths are resolved against

  // Throws FormatError with the offending key.
  void validate() const;

  double measurement_duration() const;
  // floor(duration / dt_meas) instants at n dt_meas, n >= 1.
  std::vector<double> measurement_times() const;
  std::filesystem::path resolve(const std::string& path) const;
};

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical JSON of the whole config (defaults filled in), used as the
// manifest echo.
std::string config_to_json(const ExperimentConfig& config);

ModelKind model_kind_from_string(std::string_view s);
MagnitudeSource magnitude_source_from_string(std::string_view s);
const char* to_string(ModelKind k);
const char* to_string(MagnitudeSource s);
const char* to_string(NoiseStdSource s);

}  // namespace kflow::pipeline

#endif  // KFLOW_PIPELINE_CONFIG_HPP_
