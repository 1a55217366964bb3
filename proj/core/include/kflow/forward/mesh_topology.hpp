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

#ifndef KFLOW_FORWARD_MESH_TOPOLOGY_HPP_
#define KFLOW_FORWARD_MESH_TOPOLOGY_HPP_

#include <array>
#include <vector>

#include "kflow/forward/mesh.hpp"

namespace kflow::forward {

// Faces that belong to exactly one tetrahedron, oriented outward for
// positively oriented tetrahedra. Tags are left at kWallTag.
std::vector<BoundaryFace> boundary_faces(const std::vector<std::array<int, 4>>& tets);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_MESH_TOPOLOGY_HPP_
