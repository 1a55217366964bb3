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

#ifndef KFLOW_PIPELINE_SERIES_HPP_
#define KFLOW_PIPELINE_SERIES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kflow/roukf/innovation.hpp"

namespace kflow::pipeline {

using imaging::ComplexField;
using imaging::ScalarField;

// One synthetic acquisition together with what the estimator and the error
// metric need besides the measurements themselves.
struct SeriesArchive {
  roukf::MeasurementSeries series;
  imaging::VoxelGrid grid;
  double venc = 0.0;
  double sigma = 0.0;           // true k-space noise std per real/imaginary channel
  double velocity_sigma = 0.0;  // matching std of decoded velocities in the lumen
  int coils = 1;
  std::vector<ScalarField> magnitude_true;   // per coil
  std::vector<ScalarField> magnitude_zf_r2;  // per coil, k-space series only
  ScalarField phi_back;
  // Acquisition of the fluid at rest under the series mask, [direction][coil];
  // k-space series only.
  std::vector<std::vector<ComplexField>> calibration;
  // Velocity samples of the reference run at each measurement instant.
  std::vector<Eigen::VectorXd> reference;
  std::uint64_t seed = 0;
  int realization = 0;
  std::string config_json;  // echo of the generating config
};

// Directory layout:
//   manifest.json          times, venc, directions, coils, masks, per-file SHA-256
//   mask_<m>.kfe           sampling masks
//   frame_<n>_d<d>.kfe     velocity frames, or
//   frame_<n>_d<d>_c<c>.kfe  k-space frames
//   magnitude_c<c>.kfe, magnitude_zf_r2_c<c>.kfe, phi_back.kfe,
//   calibration_d<d>_c<c>.kfe, reference.kfe
// Writes are deterministic: equal archives give byte-identical directories.
void write_series(const std::filesystem::path& dir, const SeriesArchive& archive);

// Reads and checks every file against the manifest digests; throws
// FormatError on a missing file or a digest mismatch.
SeriesArchive read_series(const std::filesystem::path& dir);

inline constexpr const char* kSeriesFormat = "kflow-series 1";

}  // namespace kflow::pipeline

#endif  // KFLOW_PIPELINE_SERIES_HPP_
