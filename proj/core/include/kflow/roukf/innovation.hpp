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

#ifndef KFLOW_ROUKF_INNOVATION_HPP_
#define KFLOW_ROUKF_INNOVATION_HPP_

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "kflow/imaging/sampling_mask.hpp"
#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::roukf {

using imaging::ComplexField;
using imaging::SamplingMask;
using imaging::ScalarField;
using imaging::Vec3;

enum class InnovationKind { Velocity, WrappedVelocity, KSpace };

InnovationKind innovation_kind_from_string(std::string_view s);
const char* to_string(InnovationKind k);

// V - Hu, flattened in voxel storage order.
Eigen::VectorXd innovation_velocity(const ScalarField& V, const ScalarField& Hu);

// (venc / pi) sin((pi / venc)(V - Hu)): insensitive to 2 venc aliasing and
// equal to V - Hu to third order when |V - Hu| << venc.
Eigen::VectorXd innovation_wrapped(const ScalarField& V, const ScalarField& Hu, double venc);

// [Re; Im] of Y - dft3(M exp(i (pi u / venc + phi_back))) over the selected
// voxels of `mask`, in storage order (all real parts first).
Eigen::VectorXd innovation_kspace(const ComplexField& Y, const ScalarField& u_model,
                                  const ScalarField& magnitude, const ScalarField& phi_back,
                                  double venc, const SamplingMask& mask);

// One receiver channel of a k-space acquisition.
struct CoilChannel {
  ScalarField magnitude;  // coil-weighted magnitude
  ScalarField phi_back;
  double sigma = 1.0;     // per real/imaginary channel
};

// Residuals of every coil back to back with the matching diagonal of W^-1
// (1 / sigma_c^2 per entry of coil c).
struct StackedInnovation {
  Eigen::VectorXd residual;
  Eigen::VectorXd inverse_weights;
};
StackedInnovation stack_coils(const std::vector<CoilChannel>& coils, const std::vector<ComplexField>& Y,
                              const ScalarField& u_model, double venc, const SamplingMask& mask);

// Measurements at one instant. `velocity` is filled for velocity data (one
// field per direction); `kspace[d][c]` holds direction d, coil c for k-space
// data, zero outside the mask `mask_index[d]` of the series.
struct MeasurementFrame {
  double time = 0.0;
  std::vector<ScalarField> velocity;
  std::vector<std::vector<ComplexField>> kspace;
  std::vector<std::size_t> mask_index;
};

struct MeasurementSeries {
  std::vector<Vec3> directions;
  std::vector<SamplingMask> masks;
  std::vector<MeasurementFrame> frames;

  bool is_kspace() const noexcept { return !frames.empty() && !frames.front().kspace.empty(); }
  std::vector<double> times() const;
  // Strictly increasing times, one entry per direction, consistent grids and
  // k-space data that vanishes outside its mask.
  void validate() const;
};

// How measurements are compared with the model.
struct InnovationSpec {
  InnovationKind kind = InnovationKind::Velocity;
  double venc = 0.0;
  double sigma = 1.0;              // velocity std (Velocity / Wrapped)
  std::vector<CoilChannel> coils;  // KSpace: one entry per coil

  void validate() const;
};

}  // namespace kflow::roukf

#endif  // KFLOW_ROUKF_INNOVATION_HPP_
