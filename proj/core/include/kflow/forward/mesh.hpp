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

#ifndef KFLOW_FORWARD_MESH_HPP_
#define KFLOW_FORWARD_MESH_HPP_

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace kflow::forward {

using Vec3 = Eigen::Vector3d;

// Boundary tags: 1 = inlet, 2 = wall, 3 + k = outlet k (k zero-based).
inline constexpr int kInletTag = 1;
inline constexpr int kWallTag = 2;
inline constexpr int kFirstOutletTag = 3;

struct BoundaryFace {
  std::array<int, 3> nodes{};
  int tag = kWallTag;
};

// Linear tetrahedral mesh, coordinates in cm.
struct Mesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 4>> tets;
  std::vector<BoundaryFace> faces;

  std::size_t node_count() const noexcept { return nodes.size(); }
  // Number of distinct outlet tags (tags must be contiguous from kFirstOutletTag).
  int outlet_count() const;

  double tet_volume(std::size_t e) const;
  std::pair<Vec3, Vec3> bounding_box() const;

  // Flips tetrahedra with negative signed volume.
  void orient();

  // Throws InvalidArgument unless every tetrahedron has positive volume,
  // indices are in range, the tagged faces are exactly the boundary faces of
  // the tetrahedra (each once), an inlet exists and outlet tags are contiguous.
  void validate() const;
};

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_MESH_HPP_
