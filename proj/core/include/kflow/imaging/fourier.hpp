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

#ifndef KFLOW_IMAGING_FOURIER_HPP_
#define KFLOW_IMAGING_FOURIER_HPP_

#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::imaging {

// Unnormalized forward 3D DFT:
//   Y(k) = sum_n X(n) exp(-2 pi i (k1 n1/Nx + k2 n2/Ny + k3 n3/Nz)).
// k-space shares the voxel layout of the input: index (k1, k2, k3) with
// k_axis in [0, N_axis) and DC at index 0. No fftshift is applied.
ComplexField dft3(const ComplexField& field);

// Inverse of dft3, carrying the 1/N normalization.
ComplexField idft3(const ComplexField& kspace);

}  // namespace kflow::imaging

#endif  // KFLOW_IMAGING_FOURIER_HPP_
