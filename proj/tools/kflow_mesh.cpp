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

// kflow-mesh: writes the generated tube and bifurcation meshes.
//
//   kflow-mesh tube --out meshes/tube.kmesh [--cells-across 10] [--axial-cells 6]
//   kflow-mesh y    --out meshes/y.kmesh    [--cell-size 0.3]

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kflow/forward/mesh_generation.hpp"
#include "kflow/forward/mesh_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the built-in meshes"};
  app.require_subcommand(1);
  std::string out;

  kflow::forward::TubeMeshSpec tube;
  auto* t = app.add_subcommand("tube", "straight tube with one inlet and one outlet");
  t->add_option("--out", out, "output file")->required();
  t->add_option("--radius", tube.radius);
  t->add_option("--length", tube.length);
  t->add_option("--cells-across", tube.cells_across, "even number of cells across the diameter");
  t->add_option("--axial-cells", tube.axial_cells);

  kflow::forward::YMeshSpec y;
  auto* b = app.add_subcommand("y", "symmetric bifurcation with two outlets");
  b->add_option("--out", out, "output file")->required();
  b->add_option("--cell-size", y.cell_size);

  CLI11_PARSE(app, argc, argv);
  try {
    const auto mesh = *t ? kflow::forward::make_tube_mesh(tube) : kflow::forward::make_y_mesh(y);
    kflow::forward::write_mesh_file(out, mesh);
    std::cout << out << ": " << mesh.node_count() << " nodes, " << mesh.tets.size() << " tetrahedra, "
              << mesh.outlet_count() << " outlets\n";
  } catch (const std::exception& e) {
    std::cerr << "kflow-mesh: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
