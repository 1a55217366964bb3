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

#ifndef KFLOW_IMAGING_VOXEL_GRID_HPP_
#define KFLOW_IMAGING_VOXEL_GRID_HPP_

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace kflow::imaging {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

// Regular voxel lattice. Storage order is x fastest, then y, then z.
// `origin` is the center of voxel (0, 0, 0); lengths are in the caller's unit
// (the pipeline uses cm throughout).
struct VoxelGrid {
  std::array<std::size_t, 3> dims{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};

  VoxelGrid() = default;
  VoxelGrid(std::array<std::size_t, 3> d, Vec3 h = Vec3::Ones(), Vec3 o = Vec3::Zero());

  std::size_t size() const noexcept { return dims[0] * dims[1] * dims[2]; }
  std::size_t in_plane_size() const noexcept { return dims[0] * dims[1]; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + dims[0] * (j + dims[1] * k);
  }
  std::array<std::size_t, 3> coords(std::size_t linear) const noexcept;
  Vec3 center(std::size_t i, std::size_t j, std::size_t k) const noexcept;
  Vec3 center(std::size_t linear) const noexcept;

  // Throws InvalidArgument unless dims >= 1 and spacing > 0.
  void validate() const;

  // Smallest axis-aligned grid with spacing `h` whose voxel centers cover the
  // box [lo, hi] enlarged by `padding` voxels on every side.
  static VoxelGrid covering(const Vec3& lo, const Vec3& hi, const Vec3& h, std::size_t padding);

  friend bool operator==(const VoxelGrid& a, const VoxelGrid& b) noexcept {
    return a.dims == b.dims && a.spacing == b.spacing && a.origin == b.origin;
  }
  friend bool operator!=(const VoxelGrid& a, const VoxelGrid& b) noexcept { return !(a == b); }
};

// One value per voxel of `grid`.
template <typename T>
struct Field {
  VoxelGrid grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const VoxelGrid& g, T fill = T{}) : grid(g), values(g.size(), fill) {}
  Field(const VoxelGrid& g, std::vector<T> v) : grid(g), values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  T& operator[](std::size_t n) { return values[n]; }
  const T& operator[](std::size_t n) const { return values[n]; }
  T& at(std::size_t i, std::size_t j, std::size_t k) { return values[grid.index(i, j, k)]; }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const {
    return values[grid.index(i, j, k)];
  }
};

using ScalarField = Field<double>;
using ComplexField = Field<Complex>;

// Throws InvalidArgument when the grids differ or a field's value count does
// not match its grid.
void require_same_grid(const VoxelGrid& a, const VoxelGrid& b, const char* what);
void require_value_count(const VoxelGrid& g, std::size_t count, const char* what);

template <typename T>
void require_consistent(const Field<T>& f, const char* what) {
  require_value_count(f.grid, f.values.size(), what);
}

}  // namespace kflow::imaging

#endif  // KFLOW_IMAGING_VOXEL_GRID_HPP_
