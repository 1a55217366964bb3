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

#ifndef KFLOW_IMAGING_SAMPLING_MASK_HPP_
#define KFLOW_IMAGING_SAMPLING_MASK_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::imaging {

enum class MaskPattern : std::uint32_t { Full = 0, Spiral = 1, GaussianRandom = 2, Composed = 3 };

std::string_view to_string(MaskPattern p) noexcept;
MaskPattern mask_pattern_from_string(std::string_view name);

// Boolean selection over a k-space grid (DC at index 0 on every axis).
struct SamplingMask {
  VoxelGrid grid;
  std::vector<std::uint8_t> selected;
  double target_R = 1.0;
  MaskPattern pattern = MaskPattern::Full;

  std::size_t count() const noexcept;
  // N / |selected|.
  double achieved_R() const;
  bool operator()(std::size_t linear) const noexcept { return selected[linear] != 0; }
};

SamplingMask make_full_mask(const VoxelGrid& grid);

// Archimedean spiral with `turns` turns in the kx-ky plane whose final radius is
// half the smaller in-plane dimension. Points are spaced evenly in arc length,
// snapped to the Cartesian lattice and deduplicated; the number of spiral
// points is adjusted until the in-plane acceleration is within 10% of R. The
// in-plane pattern is replicated along kz. Throws InvalidArgument when R is
// out of range or the spiral cannot carry enough distinct lattice points.
SamplingMask make_spiral_mask(const VoxelGrid& grid, double R, int turns = 6);

// ceil(Nxy / R) distinct in-plane points drawn without replacement with
// probability proportional to exp(-|k|^2 / (2 (sigma_frac * Nmin)^2)), k
// measured from DC with centered (signed) frequencies. DC is always included.
SamplingMask make_gaussian_mask(const VoxelGrid& grid, double R, double sigma_frac,
                                std::uint64_t seed);

inline constexpr double kDefaultGaussianSigmaFrac = 1.0 / 6.0;

// Intersection of two masks on the same grid; pattern becomes Composed and
// target_R the achieved acceleration.
SamplingMask compose_masks(const SamplingMask& base, const SamplingMask& overlay);

// Signed, centered in-plane frequency of lattice index i on an axis of size n.
int centered_frequency(std::size_t i, std::size_t n) noexcept;

// Mean |k| (in lattice units) of the selected in-plane points of slice kz = 0.
double mean_selected_radius(const SamplingMask& mask);

// Binary PGM (P5) of slice kz = 0, fftshifted so DC sits at the image center.
// Selected points are white.
void write_mask_pgm(const SamplingMask& mask, std::ostream& out);
void write_mask_pgm(const SamplingMask& mask, const std::string& path);

}  // namespace kflow::imaging

#endif  // KFLOW_IMAGING_SAMPLING_MASK_HPP_
