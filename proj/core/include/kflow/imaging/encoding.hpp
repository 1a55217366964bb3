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

#ifndef KFLOW_IMAGING_ENCODING_HPP_
#define KFLOW_IMAGING_ENCODING_HPP_

#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::imaging {

// Wraps an angle into (-pi, pi].
double wrap_phase(double angle) noexcept;

// Magnetization M * exp(i (pi/venc * u + phi_back)) per voxel.
ComplexField encode_magnetization(const ScalarField& magnitude, const ScalarField& velocity,
                                  const ScalarField& phi_back, double venc);

// Phase-contrast decoding u = wrap(arg(m) - phi_back) * venc / pi, in
// [-venc, venc). Voxels with zero magnitude decode to 0.
ScalarField phase_difference_velocity(const ComplexField& m_enc, const ScalarField& phi_back,
                                      double venc);

// Per-voxel |m|.
ScalarField magnitude_of(const ComplexField& m);

// Per-voxel arg(m), in (-pi, pi].
ScalarField phase_of(const ComplexField& m);

}  // namespace kflow::imaging

#endif  // KFLOW_IMAGING_ENCODING_HPP_
