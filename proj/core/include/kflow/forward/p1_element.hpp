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

#ifndef KFLOW_FORWARD_P1_ELEMENT_HPP_
#define KFLOW_FORWARD_P1_ELEMENT_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kflow/forward/mesh.hpp"

namespace kflow::forward {

// Geometry of a linear tetrahedron: volume, gradients of the four barycentric
// basis functions and the longest edge as element size.
struct TetGeometry {
  double volume = 0.0;
  std::array<Vec3, 4> grad{};
  double h = 0.0;
};

// Throws InvalidArgument for degenerate or inverted elements.
TetGeometry tet_geometry(const Vec3& x0, const Vec3& x1, const Vec3& x2, const Vec3& x3);

struct FaceGeometry {
  double area = 0.0;
  Vec3 normal = Vec3::Zero();  // unit, pointing out of the domain
};

enum NodeFlags : std::uint8_t {
  kNodeInlet = 1,
  kNodeWall = 2,
  kNodeOutlet = 4,
};

// Mesh-dependent data shared by every P1 operator: element geometry, outward
// face normals, node classification and the scalar mass / stiffness matrices.
class P1Space {
 public:
  explicit P1Space(Mesh mesh);

  const Mesh& mesh() const noexcept { return mesh_; }
  std::size_t node_count() const noexcept { return mesh_.nodes.size(); }
  int outlet_count() const noexcept { return outlets_; }

  const std::vector<TetGeometry>& tets() const noexcept { return tets_; }
  const std::vector<FaceGeometry>& faces() const noexcept { return faces_; }
  const std::vector<std::uint8_t>& node_flags() const noexcept { return flags_; }

  // Velocity Dirichlet nodes: every wall node (including rims) and the
  // remaining inlet nodes.
  bool is_wall(std::size_t i) const noexcept { return flags_[i] & kNodeWall; }
  bool is_dirichlet(std::size_t i) const noexcept { return flags_[i] & (kNodeWall | kNodeInlet); }

  const Eigen::SparseMatrix<double>& mass() const noexcept { return mass_; }
  const Eigen::SparseMatrix<double>& stiffness() const noexcept { return stiffness_; }

  // Integral of each basis function over the faces carrying `tag`.
  const Eigen::VectorXd& boundary_weights(int tag) const;
  double boundary_area(int tag) const;
  Eigen::VectorXd basis_integrals() const;  // over the volume

  // Area-weighted unit normal of the inlet at each inlet node (zero elsewhere).
  const std::vector<Vec3>& inlet_normals() const noexcept { return inlet_normals_; }

  // Flux of an interleaved nodal vector field (u[3i + c]) through the faces
  // with `tag`, integrated exactly for P1.
  double flux(const Eigen::VectorXd& u, int tag) const;
  // Flux through the whole boundary.
  double boundary_flux(const Eigen::VectorXd& u) const;

  double volume() const noexcept { return volume_; }

 private:
  Mesh mesh_;
  int outlets_ = 0;
  std::vector<TetGeometry> tets_;
  std::vector<FaceGeometry> faces_;
  std::vector<std::uint8_t> flags_;
  std::vector<Eigen::VectorXd> weights_;  // indexed by tag - 1
  std::vector<double> areas_;
  std::vector<Vec3> inlet_normals_;
  Eigen::SparseMatrix<double> mass_;
  Eigen::SparseMatrix<double> stiffness_;
  double volume_ = 0.0;
};

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_P1_ELEMENT_HPP_
