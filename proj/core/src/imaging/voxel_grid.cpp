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

#include "kflow/imaging/voxel_grid.hpp"

#include <cmath>
#include <string>

#include "kflow/error.hpp"

namespace kflow::imaging {

VoxelGrid::VoxelGrid(std::array<std::size_t, 3> d, Vec3 h, Vec3 o)
    : dims(d), spacing(std::move(h)), origin(std::move(o)) {
  validate();
}

std::array<std::size_t, 3> VoxelGrid::coords(std::size_t linear) const noexcept {
  const std::size_t i = linear % dims[0];
  const std::size_t rest = linear / dims[0];
  return {i, rest % dims[1], rest / dims[1]};
}

Vec3 VoxelGrid::center(std::size_t i, std::size_t j, std::size_t k) const noexcept {
  return origin + Vec3(spacing.x() * static_cast<double>(i), spacing.y() * static_cast<double>(j),
                       spacing.z() * static_cast<double>(k));
}

Vec3 VoxelGrid::center(std::size_t linear) const noexcept {
  const auto c = coords(linear);
  return center(c[0], c[1], c[2]);
}

void VoxelGrid::validate() const {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 1) throw InvalidArgument("VoxelGrid: every dimension must be >= 1");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw InvalidArgument("VoxelGrid: spacing must be positive and finite");
    if (!std::isfinite(origin[a])) throw InvalidArgument("VoxelGrid: origin must be finite");
  }
}

VoxelGrid VoxelGrid::covering(const Vec3& lo, const Vec3& hi, const Vec3& h, std::size_t padding) {
  std::array<std::size_t, 3> d{};
  Vec3 o;
  for (int a = 0; a < 3; ++a) {
    const double extent = std::max(hi[a] - lo[a], 0.0);
    const auto inner = static_cast<std::size_t>(std::ceil(extent / h[a] - 1e-9)) + 1;
    d[a] = inner + 2 * padding;
    const double mid = 0.5 * (lo[a] + hi[a]);
    o[a] = mid - 0.5 * h[a] * static_cast<double>(d[a] - 1);
  }
  return VoxelGrid(d, h, o);
}

void require_same_grid(const VoxelGrid& a, const VoxelGrid& b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": grid mismatch");
}

void require_value_count(const VoxelGrid& g, std::size_t count, const char* what) {
  if (count != g.size())
    throw InvalidArgument(std::string(what) + ": value count " + std::to_string(count) +
                          " does not match grid size " + std::to_string(g.size()));
}

}  // namespace kflow::imaging
