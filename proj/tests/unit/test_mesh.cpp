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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "kflow/error.hpp"
#include "kflow/forward/mesh.hpp"
#include "kflow/forward/mesh_generation.hpp"
#include "kflow/forward/mesh_io.hpp"
#include "kflow/forward/mesh_topology.hpp"

namespace {

using namespace kflow::forward;

double total_volume(const Mesh& m) {
  double v = 0.0;
  for (std::size_t e = 0; e < m.tets.size(); ++e) v += m.tet_volume(e);
  return v;
}

double tagged_area(const Mesh& m, int tag) {
  double a = 0.0;
  for (const auto& f : m.faces)
    if (f.tag == tag) {
      const Vec3 p = m.nodes[f.nodes[0]], q = m.nodes[f.nodes[1]], r = m.nodes[f.nodes[2]];
      a += 0.5 * (q - p).cross(r - p).norm();
    }
  return a;
}

bool has_node(const Mesh& m, const Vec3& x) {
  return std::any_of(m.nodes.begin(), m.nodes.end(), [&](const Vec3& y) { return (x - y).norm() < 1e-9; });
}

TEST(TubeMesh, IsValidAndApproximatesTheCylinder) {
  const TubeMeshSpec spec;
  const Mesh m = make_tube_mesh(spec);
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.outlet_count(), 1);
  const double area = std::numbers::pi * spec.radius * spec.radius;
  EXPECT_NEAR(total_volume(m), area * spec.length, 0.03 * area * spec.length);
  EXPECT_NEAR(tagged_area(m, kInletTag), area, 0.03 * area);
  EXPECT_NEAR(tagged_area(m, kFirstOutletTag), tagged_area(m, kInletTag), 1e-12);
  for (const auto& f : m.faces)
    for (int v : f.nodes) {
      if (f.tag == kInletTag) EXPECT_NEAR(m.nodes[v].z(), 0.0, 1e-12);
      if (f.tag == kFirstOutletTag) EXPECT_NEAR(m.nodes[v].z(), spec.length, 1e-12);
    }
}

TEST(TubeMesh, IsMirrorSymmetric) {
  const Mesh m = make_tube_mesh({0.5, 1.0, 4, 2});
  for (const auto& x : m.nodes) {
    EXPECT_TRUE(has_node(m, Vec3(-x.x(), x.y(), x.z())));
    EXPECT_TRUE(has_node(m, Vec3(x.x(), -x.y(), x.z())));
  }
}

TEST(YMesh, HasTwoMirroredOutlets) {
  const Mesh m = make_y_mesh();
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.outlet_count(), 2);
  EXPECT_NEAR(tagged_area(m, kFirstOutletTag), tagged_area(m, kFirstOutletTag + 1), 1e-9);
  for (const auto& f : m.faces) {
    if (f.tag == kFirstOutletTag) EXPECT_GT(m.nodes[f.nodes[0]].x(), 0.0);
    if (f.tag == kFirstOutletTag + 1) EXPECT_LT(m.nodes[f.nodes[0]].x(), 0.0);
  }
}

TEST(BoundaryFaces, SingleTetHasOutwardFaces) {
  const std::vector<std::array<int, 4>> tets{{0, 1, 2, 3}};
  const std::vector<Vec3> x{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto faces = boundary_faces(tets);
  ASSERT_EQ(faces.size(), 4u);
  const Vec3 centroid(0.25, 0.25, 0.25);
  for (const auto& f : faces) {
    const Vec3 n = (x[f.nodes[1]] - x[f.nodes[0]]).cross(x[f.nodes[2]] - x[f.nodes[0]]);
    EXPECT_GT(n.dot(x[f.nodes[0]] - centroid), 0.0);
  }
}

TEST(BoundaryFaces, SharedFaceIsInterior) {
  const std::vector<std::array<int, 4>> tets{{0, 1, 2, 3}, {1, 2, 3, 4}};
  EXPECT_EQ(boundary_faces(tets).size(), 6u);
}

TEST(MeshValidate, RejectsBrokenMeshes) {
  Mesh m = make_tube_mesh({0.5, 1.0, 4, 1});
  Mesh inverted = m;
  std::swap(inverted.tets[0][0], inverted.tets[0][1]);
  EXPECT_THROW(inverted.validate(), kflow::InvalidArgument);
  Mesh untagged = m;
  untagged.faces.pop_back();
  EXPECT_THROW(untagged.validate(), kflow::InvalidArgument);
  Mesh no_inlet = m;
  for (auto& f : no_inlet.faces)
    if (f.tag == kInletTag) f.tag = kWallTag;
  EXPECT_THROW(no_inlet.validate(), kflow::InvalidArgument);
  Mesh gap = m;
  for (auto& f : gap.faces)
    if (f.tag == kFirstOutletTag) f.tag = kFirstOutletTag + 1;
  EXPECT_THROW(gap.validate(), kflow::InvalidArgument);
}

TEST(MeshIo, NativeRoundTripIsExact) {
  const Mesh m = make_tube_mesh({0.5, 1.0, 4, 2});
  std::stringstream s;
  write_mesh(s, m);
  const Mesh r = read_mesh(s);
  ASSERT_EQ(r.nodes.size(), m.nodes.size());
  for (std::size_t i = 0; i < m.nodes.size(); ++i) EXPECT_EQ(r.nodes[i], m.nodes[i]);
  EXPECT_EQ(r.tets, m.tets);
  ASSERT_EQ(r.faces.size(), m.faces.size());
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    EXPECT_EQ(r.faces[i].nodes, m.faces[i].nodes);
    EXPECT_EQ(r.faces[i].tag, m.faces[i].tag);
  }
}

TEST(MeshIo, NativeRejectsMalformedInput) {
  std::stringstream bad_header("kflow-mesh 2\nnodes 0\n");
  EXPECT_THROW(read_mesh(bad_header), kflow::FormatError);
  std::stringstream truncated("kflow-mesh 1\nnodes 2\n0 0 0\n");
  EXPECT_THROW(read_mesh(truncated), kflow::FormatError);
}

TEST(MeshIo, ShippedMeshesLoad) {
  const Mesh tube = load_mesh(std::string(KFLOW_SOURCE_DIR) + "/meshes/tube.kmesh");
  EXPECT_EQ(tube.outlet_count(), 1);
  const Mesh y = load_mesh(std::string(KFLOW_SOURCE_DIR) + "/meshes/y.kmesh");
  EXPECT_EQ(y.outlet_count(), 2);
}

// One inverted tetrahedron with 1-based, non-contiguous node ids.
constexpr const char* kGmsh = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
10 0 0 0
20 1 0 0
30 0 1 0
40 0 0 1
$EndNodes
$Elements
6
1 15 2 0 10 10
2 4 2 0 1 10 30 20 40
3 2 2 1 1 10 20 30
4 2 2 2 1 10 20 40
5 2 2 2 1 10 30 40
6 2 2 3 1 20 30 40
$EndElements
)";

TEST(MeshIo, GmshReaderRemapsAndOrients) {
  std::stringstream s(kGmsh);
  const Mesh m = read_gmsh2(s);
  ASSERT_EQ(m.nodes.size(), 4u);
  ASSERT_EQ(m.tets.size(), 1u);
  EXPECT_GT(m.tet_volume(0), 0.0);
  EXPECT_NEAR(m.tet_volume(0), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(m.faces.size(), 4u);
  EXPECT_EQ(m.outlet_count(), 1);
}

TEST(MeshIo, GmshRejectsBinaryAndVersion4) {
  std::string binary = kGmsh;
  binary.replace(binary.find("2.2 0 8"), 7, "2.2 1 8");
  std::stringstream a(binary);
  EXPECT_THROW(read_gmsh2(a), kflow::FormatError);
  std::string v4 = kGmsh;
  v4.replace(v4.find("2.2 0 8"), 7, "4.1 0 8");
  std::stringstream b(v4);
  EXPECT_THROW(read_gmsh2(b), kflow::FormatError);
}

}  // namespace
