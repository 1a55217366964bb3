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

#include <gtest/gtest.h>

#include <cmath>

#include "kflow/forward/mesh_generation.hpp"
#include "kflow/forward/navier_stokes.hpp"
#include "kflow/forward/voxelizer.hpp"

namespace {

using namespace kflow::forward;
using kflow::imaging::VoxelGrid;

const Mesh& tube() {
  static const Mesh m = make_tube_mesh({0.5, 2.0, 6, 4});
  return m;
}

VoxelGrid tube_grid() { return VoxelGrid({9, 9, 12}, Vec3::Constant(0.15), Vec3(-0.6, -0.6, -0.1)); }

TEST(PointLocator, FindsContainingTet) {
  const PointLocator loc(tube());
  const Vec3 x(0.1, -0.05, 1.3);
  const auto hit = loc.locate(x);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->barycentric.sum(), 1.0, 1e-12);
  EXPECT_GE(hit->barycentric.minCoeff(), -1e-12);
  Vec3 y = Vec3::Zero();
  for (int i = 0; i < 4; ++i) y += hit->barycentric[i] * tube().nodes[tube().tets[hit->tet][i]];
  EXPECT_NEAR((x - y).norm(), 0.0, 1e-12);
  EXPECT_FALSE(loc.locate(Vec3(0.0, 0.0, 2.5)).has_value());
  EXPECT_FALSE(loc.locate(Vec3(0.6, 0.0, 1.0)).has_value());
}

TEST(Voxelizer, LinearFieldsAreInterpolatedExactly) {
  const Voxelizer vox(tube(), tube_grid());
  const auto n = tube().nodes.size();
  Eigen::VectorXd u(static_cast<Eigen::Index>(3 * n));
  const auto field = [](const Vec3& x) { return Vec3(1.0 + x.y(), 2.0 * x.z() - x.x(), 3.0 + 0.5 * x.x()); };
  for (std::size_t i = 0; i < n; ++i) u.segment<3>(static_cast<Eigen::Index>(3 * i)) = field(tube().nodes[i]);
  const Vec3 d = Vec3(1.0, 2.0, -1.0).normalized();
  const auto V = vox.apply(u, d);
  std::size_t inside = 0;
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (vox.inside()[v]) {
      ++inside;
      EXPECT_NEAR(V[v], field(tube_grid().center(v)).dot(d), 1e-12);
    } else {
      EXPECT_EQ(V[v], 0.0);
    }
  }
  EXPECT_GT(inside, 100u);
}

TEST(Voxelizer, LumenMaskFollowsTheGeometry) {
  const auto g = tube_grid();
  const Voxelizer vox(tube(), g);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Vec3 c = g.center(v);
    const double r = std::hypot(c.x(), c.y());
    const bool in_z = c.z() > 0.0 && c.z() < 2.0;
    if (in_z && r < 0.45) EXPECT_TRUE(vox.inside()[v]) << v;
    if (!in_z || r > 0.5) EXPECT_FALSE(vox.inside()[v]) << v;
  }
  // Interpolation rows of inside voxels sum to one.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(tube().nodes.size()));
  const auto s = vox.apply_scalar(ones);
  for (std::size_t v = 0; v < g.size(); ++v) EXPECT_NEAR(s[v], vox.inside()[v] ? 1.0 : 0.0, 1e-12);
}

TEST(Voxelizer, ModelObservationMatchesFreeFunction) {
  const NavierStokesModel m(tube());
  FlowState s = m.zero_state();
  for (Eigen::Index i = 0; i < s.u.size(); ++i) s.u[i] = std::sin(0.37 * static_cast<double>(i));
  const Vec3 d(0.0, 0.0, 1.0);
  const auto a = m.observe_velocity(m.pack(s), d, tube_grid());
  const auto b = voxelize_velocity(s, tube(), tube_grid(), d);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(m.lumen_mask(tube_grid()), Voxelizer(tube(), tube_grid()).inside());
}

}  // namespace
