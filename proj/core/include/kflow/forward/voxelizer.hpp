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

#ifndef KFLOW_FORWARD_VOXELIZER_HPP_
#define KFLOW_FORWARD_VOXELIZER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kflow/forward/mesh.hpp"
#include "kflow/forward/navier_stokes.hpp"
#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::forward {

// Finds the tetrahedron containing a point through a uniform bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);

  struct Hit {
    int tet = -1;
    Eigen::Vector4d barycentric = Eigen::Vector4d::Zero();
  };
  std::optional<Hit> locate(const Vec3& x) const;

 private:
  const Mesh& mesh_;
  std::vector<Eigen::Matrix3d> inverse_jacobian_;
  Vec3 lo_;
  Vec3 cell_;
  std::array<int, 3> dims_{};
  std::vector<std::vector<int>> buckets_;
};

// Sparse P1 interpolation from mesh nodes to voxel centers.
class Voxelizer {
 public:
  Voxelizer(const Mesh& mesh, const imaging::VoxelGrid& grid);

  const imaging::VoxelGrid& grid() const noexcept { return grid_; }
  const std::vector<std::uint8_t>& inside() const noexcept { return inside_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& interpolation() const noexcept { return W_; }

  // Interleaved nodal vector field projected onto `direction`.
  imaging::ScalarField apply(const Eigen::VectorXd& u, const Vec3& direction) const;
  // Nodal scalar field.
  imaging::ScalarField apply_scalar(const Eigen::VectorXd& f) const;

 private:
  imaging::VoxelGrid grid_;
  std::vector<std::uint8_t> inside_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> W_;
};

imaging::ScalarField voxelize_velocity(const FlowState& state, const Mesh& mesh,
                                       const imaging::VoxelGrid& grid, const Vec3& direction);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_VOXELIZER_HPP_
