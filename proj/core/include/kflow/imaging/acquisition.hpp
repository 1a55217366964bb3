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

#ifndef KFLOW_IMAGING_ACQUISITION_HPP_
#define KFLOW_IMAGING_ACQUISITION_HPP_

#include <cstdint>
#include <vector>

#include "kflow/imaging/sampling_mask.hpp"
#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::imaging {

struct AcquisitionConfig {
  double venc = 150.0;              // cm/s
  double snr = 15.0;                // image-space SNR; +inf disables noise
  Vec3 direction{0.0, 0.0, 1.0};    // unit encoding direction
  double measurement_period = 0.015;  // s
  std::uint64_t noise_seed = 0;

  void validate() const;
};

// (dft3(m) + eps) restricted to the mask. eps has independent real and
// imaginary N(0, sigma^2) parts. The noise sequence is drawn for every voxel in
// storage order and then masked, so two masks on the same grid and seed see
// identical noise at shared locations. Unselected entries are exactly zero.
ComplexField simulate_kspace(const ComplexField& m, const SamplingMask& mask, double sigma,
                             std::uint64_t seed);

// k-space per-channel noise std for an image-space SNR, defined as mean
// foreground magnitude over image-space noise std. With the unnormalized DFT
// the k-space std is sqrt(N) times the image-space std.
double snr_to_sigma(const ScalarField& magnitude, const std::vector<std::uint8_t>& foreground,
                    double snr);

// Mean foreground magnitude over the pooled real/imaginary std of
// (image - reference) restricted to the foreground.
double measured_image_snr(const ComplexField& image, const ComplexField& reference,
                          const std::vector<std::uint8_t>& foreground);

// idft3 of masked k-space. Unacquired entries act as zeros; no density
// compensation is applied, so the DC amplitude of the image is preserved.
ComplexField zero_filled_reconstruction(const ComplexField& kspace, const SamplingMask& mask);

// Pooled real/imaginary sample std over the selected voxels of
// Y0 - dft3(M exp(i phi_back)) (.) S, i.e. of the first acquisition under the
// assumption of zero velocity. Throws InvalidArgument for fewer than 2
// selected voxels.
double estimate_noise_std(const ComplexField& y0, const ScalarField& magnitude,
                          const ScalarField& phi_back, const SamplingMask& mask);

// Applies the mask in place (unselected entries become 0).
void apply_mask(ComplexField& kspace, const SamplingMask& mask);

}  // namespace kflow::imaging

#endif  // KFLOW_IMAGING_ACQUISITION_HPP_
