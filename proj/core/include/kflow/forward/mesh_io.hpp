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

#ifndef KFLOW_FORWARD_MESH_IO_HPP_
#define KFLOW_FORWARD_MESH_IO_HPP_

#include <iosfwd>
#include <string>

#include "kflow/forward/mesh.hpp"

namespace kflow::forward {

// Native text format ('#' starts a comment line):
//
//   kflow-mesh 1
//   nodes <N>
//   <x> <y> <z>            N lines, cm
//   tets <M>
//   <a> <b> <c> <d>        M lines, zero-based node indices
//   faces <F>
//   <a> <b> <c> <tag>      F lines; tag 1 inlet, 2 wall, 3+k outlet k
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

// Gmsh MSH 2.2 ASCII. Tetrahedra (type 4) become cells; triangles (type 2)
// become boundary faces tagged with their physical group, which must follow
// the tag convention above. Node ids are remapped to zero-based indices.
Mesh read_gmsh2(std::istream& in);
Mesh read_gmsh2_file(const std::string& path);

// Picks the reader from the extension (.msh -> Gmsh, otherwise native).
Mesh load_mesh(const std::string& path);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_MESH_IO_HPP_
