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

#ifndef KFLOW_FORWARD_MESH_GENERATION_HPP_
#define KFLOW_FORWARD_MESH_GENERATION_HPP_

#include "kflow/forward/mesh.hpp"

namespace kflow::forward {

// Straight circular tube along +z with the inlet at z = 0 and one outlet at
// z = length. The cross-section is a square lattice of `cells_across` cells
// mapped onto the disk; each hexahedron is split into six tetrahedra with the
// split mirrored per quadrant, so the mesh is symmetric under x -> -x and
// y -> -y.
struct TubeMeshSpec {
  double radius = 0.5;
  double length = 4.0;
  int cells_across = 10;
  int axial_cells = 6;
};
Mesh make_tube_mesh(const TubeMeshSpec& spec = {});

// Planar Y bifurcation carved from a voxel lattice: a trunk along +z that
// splits into two branches bending out in the x-z plane and ending parallel
// to z. Inlet at z = 0, outlet 0 at x > 0, outlet 1 at x < 0. The lattice and
// the tetrahedral split are mirrored about x = 0.
struct YMeshSpec {
  double trunk_radius = 1.0;
  double trunk_length = 3.0;
  double branch_radius = 0.7;
  double branch_offset = 1.3;   // |x| of the branch axes
  double transition_length = 2.0;
  double branch_length = 3.0;
  double cell_size = 0.3;
};
Mesh make_y_mesh(const YMeshSpec& spec = {});

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_MESH_GENERATION_HPP_
