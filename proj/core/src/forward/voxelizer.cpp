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

#include "kflow/forward/voxelizer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "kflow/error.hpp"

namespace kflow::forward {
namespace {

constexpr double kInsideTolerance = 1e-10;

}  // namespace

PointLocator::PointLocator(const Mesh& mesh) : mesh_(mesh) {
  const auto [lo, hi] = mesh.bounding_box();
  double mean_h = 0.0;
  inverse_jacobian_.reserve(mesh.tets.size());
  for (const auto& t : mesh.tets) {
    Eigen::Matrix3d J;
    for (int c = 0; c < 3; ++c) J.col(c) = mesh.nodes[t[c + 1]] - mesh.nodes[t[0]];
    const double scale = J.colwise().norm().maxCoeff();
    if (!(std::abs(J.determinant()) > 1e-12 * scale * scale * scale))
      throw InvalidArgument("PointLocator: degenerate tetrahedron");
    inverse_jacobian_.push_back(J.inverse());
    mean_h += scale;
  }
  mean_h /= static_cast<double>(mesh.tets.size());
  lo_ = lo;
  cell_ = Vec3::Constant(mean_h);
  for (int a = 0; a < 3; ++a) dims_[a] = std::max(1, static_cast<int>(std::ceil((hi[a] - lo[a]) / mean_h)));
  buckets_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2], {});
  const auto clamp_cell = [&](double x, int a) {
    return std::clamp(static_cast<int>(std::floor((x - lo_[a]) / cell_[a])), 0, dims_[a] - 1);
  };
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    Vec3 tlo = mesh.nodes[mesh.tets[e][0]];
    Vec3 thi = tlo;
    for (int v : mesh.tets[e]) {
      tlo = tlo.cwiseMin(mesh.nodes[v]);
      thi = thi.cwiseMax(mesh.nodes[v]);
    }
    std::array<int, 3> b0{}, b1{};
    for (int a = 0; a < 3; ++a) {
      b0[a] = clamp_cell(tlo[a] - kInsideTolerance, a);
      b1[a] = clamp_cell(thi[a] + kInsideTolerance, a);
    }
    for (int k = b0[2]; k <= b1[2]; ++k)
      for (int j = b0[1]; j <= b1[1]; ++j)
        for (int i = b0[0]; i <= b1[0]; ++i)
          buckets_[static_cast<std::size_t>((k * dims_[1] + j) * dims_[0] + i)].push_back(static_cast<int>(e));
  }
}

std::optional<PointLocator::Hit> PointLocator::locate(const Vec3& x) const {
  std::array<int, 3> b{};
  for (int a = 0; a < 3; ++a) {
    const double s = (x[a] - lo_[a]) / cell_[a];
    if (s < -1e-9 || s > dims_[a] + 1e-9) return std::nullopt;
    b[a] = std::clamp(static_cast<int>(std::floor(s)), 0, dims_[a] - 1);
  }
  for (int e : buckets_[static_cast<std::size_t>((b[2] * dims_[1] + b[1]) * dims_[0] + b[0])]) {
    const Vec3 l = inverse_jacobian_[static_cast<std::size_t>(e)] * (x - mesh_.nodes[mesh_.tets[e][0]]);
    const double l0 = 1.0 - l.sum();
    if (l0 >= -kInsideTolerance && l.minCoeff() >= -kInsideTolerance) {
      Hit hit;
      hit.tet = e;
      hit.barycentric << l0, l[0], l[1], l[2];
      return hit;
    }
  }
  return std::nullopt;
}

Voxelizer::Voxelizer(const Mesh& mesh, const imaging::VoxelGrid& grid) : grid_(grid) {
  grid_.validate();
  const PointLocator locator(mesh);
  inside_.assign(grid_.size(), 0);
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t v = 0; v < grid_.size(); ++v) {
    const auto hit = locator.locate(grid_.center(v));
    if (!hit) continue;
    inside_[v] = 1;
    for (int a = 0; a < 4; ++a)
      entries.emplace_back(static_cast<int>(v), mesh.tets[hit->tet][a], hit->barycentric[a]);
  }
  W_.resize(static_cast<Eigen::Index>(grid_.size()), static_cast<Eigen::Index>(mesh.nodes.size()));
  W_.setFromTriplets(entries.begin(), entries.end());
}

imaging::ScalarField Voxelizer::apply(const Eigen::VectorXd& u, const Vec3& direction) const {
  if (u.size() != 3 * W_.cols()) throw InvalidArgument("Voxelizer: velocity does not match the mesh");
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>> U(u.data(), W_.cols(), 3);
  return apply_scalar(U * direction);
}

imaging::ScalarField Voxelizer::apply_scalar(const Eigen::VectorXd& f) const {
  if (f.size() != W_.cols()) throw InvalidArgument("Voxelizer: nodal field does not match the mesh");
  const Eigen::VectorXd v = W_ * f;
  return imaging::ScalarField(grid_, std::vector<double>(v.data(), v.data() + v.size()));
}

imaging::ScalarField voxelize_velocity(const FlowState& state, const Mesh& mesh,
                                       const imaging::VoxelGrid& grid, const Vec3& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw InvalidArgument("voxelize_velocity: direction must be a unit vector");
  const auto [lo, hi] = mesh.bounding_box();
  const Vec3 glo = grid.center(0);
  const Vec3 ghi = grid.center(grid.size() - 1);
  if ((ghi.array() < lo.array()).any() || (glo.array() > hi.array()).any())
    throw InvalidArgument("voxelize_velocity: grid does not overlap the mesh");
  return Voxelizer(mesh, grid).apply(state.u, direction);
}

}  // namespace kflow::forward
