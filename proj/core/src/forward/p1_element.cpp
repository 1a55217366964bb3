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

#include "kflow/forward/p1_element.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "kflow/error.hpp"

namespace kflow::forward {

TetGeometry tet_geometry(const Vec3& x0, const Vec3& x1, const Vec3& x2, const Vec3& x3) {
  Eigen::Matrix3d J;
  J.col(0) = x1 - x0;
  J.col(1) = x2 - x0;
  J.col(2) = x3 - x0;
  const double det = J.determinant();
  const double scale = std::max({J.col(0).norm(), J.col(1).norm(), J.col(2).norm()});
  if (!(det > 1e-12 * scale * scale * scale))
    throw InvalidArgument("tet_geometry: degenerate or inverted tetrahedron");
  const Eigen::Matrix3d Jinv = J.inverse();
  TetGeometry g;
  g.volume = det / 6.0;
  g.grad[1] = Jinv.row(0).transpose();
  g.grad[2] = Jinv.row(1).transpose();
  g.grad[3] = Jinv.row(2).transpose();
  g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
  const std::array<const Vec3*, 4> x{&x0, &x1, &x2, &x3};
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) g.h = std::max(g.h, (*x[a] - *x[b]).norm());
  return g;
}

P1Space::P1Space(Mesh mesh) : mesh_(std::move(mesh)) {
  mesh_.validate();
  const std::size_t n = mesh_.nodes.size();
  outlets_ = mesh_.outlet_count();

  tets_.reserve(mesh_.tets.size());
  std::vector<Eigen::Triplet<double>> m_entries;
  std::vector<Eigen::Triplet<double>> k_entries;
  m_entries.reserve(16 * mesh_.tets.size());
  k_entries.reserve(16 * mesh_.tets.size());
  // Opposite vertex of every boundary face, used to orient normals outward.
  std::map<std::array<int, 3>, int> opposite;
  for (const auto& t : mesh_.tets) {
    const auto& x = mesh_.nodes;
    tets_.push_back(tet_geometry(x[t[0]], x[t[1]], x[t[2]], x[t[3]]));
    const auto& g = tets_.back();
    volume_ += g.volume;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        m_entries.emplace_back(t[a], t[b], g.volume * (a == b ? 0.1 : 0.05));
        k_entries.emplace_back(t[a], t[b], g.volume * g.grad[a].dot(g.grad[b]));
      }
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> key{};
      int m = 0;
      for (int a = 0; a < 4; ++a)
        if (a != skip) key[m++] = t[a];
      std::sort(key.begin(), key.end());
      opposite[key] = t[skip];
    }
  }
  mass_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  mass_.setFromTriplets(m_entries.begin(), m_entries.end());
  stiffness_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  stiffness_.setFromTriplets(k_entries.begin(), k_entries.end());

  const int max_tag = kFirstOutletTag + outlets_ - 1;
  weights_.assign(static_cast<std::size_t>(max_tag), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  areas_.assign(static_cast<std::size_t>(max_tag), 0.0);
  flags_.assign(n, 0);
  inlet_normals_.assign(n, Vec3::Zero());
  faces_.reserve(mesh_.faces.size());
  for (const auto& f : mesh_.faces) {
    const Vec3& a = mesh_.nodes[f.nodes[0]];
    const Vec3& b = mesh_.nodes[f.nodes[1]];
    const Vec3& c = mesh_.nodes[f.nodes[2]];
    Vec3 cross = (b - a).cross(c - a);
    FaceGeometry fg;
    fg.area = 0.5 * cross.norm();
    if (!(fg.area > 0.0)) throw InvalidArgument("P1Space: degenerate boundary face");
    fg.normal = cross.normalized();
    auto key = f.nodes;
    std::sort(key.begin(), key.end());
    const Vec3& inner = mesh_.nodes[opposite.at(key)];
    if (fg.normal.dot(inner - a) > 0.0) fg.normal = -fg.normal;
    faces_.push_back(fg);

    const auto slot = static_cast<std::size_t>(f.tag - 1);
    areas_[slot] += fg.area;
    const std::uint8_t flag = f.tag == kInletTag  ? kNodeInlet
                              : f.tag == kWallTag ? kNodeWall
                                                  : kNodeOutlet;
    for (int v : f.nodes) {
      weights_[slot][v] += fg.area / 3.0;
      flags_[static_cast<std::size_t>(v)] |= flag;
      if (f.tag == kInletTag) inlet_normals_[static_cast<std::size_t>(v)] += fg.area * fg.normal;
    }
  }
  for (auto& nrm : inlet_normals_)
    if (nrm.norm() > 0.0) nrm.normalize();
}

const Eigen::VectorXd& P1Space::boundary_weights(int tag) const {
  if (tag < 1 || tag > static_cast<int>(weights_.size()))
    throw InvalidArgument("P1Space: unknown boundary tag " + std::to_string(tag));
  return weights_[static_cast<std::size_t>(tag - 1)];
}

double P1Space::boundary_area(int tag) const {
  if (tag < 1 || tag > static_cast<int>(areas_.size()))
    throw InvalidArgument("P1Space: unknown boundary tag " + std::to_string(tag));
  return areas_[static_cast<std::size_t>(tag - 1)];
}

Eigen::VectorXd P1Space::basis_integrals() const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_count()));
  for (std::size_t e = 0; e < tets_.size(); ++e)
    for (int v : mesh_.tets[e]) w[v] += 0.25 * tets_[e].volume;
  return w;
}

double P1Space::flux(const Eigen::VectorXd& u, int tag) const {
  double q = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (mesh_.faces[f].tag != tag) continue;
    Vec3 mean = Vec3::Zero();
    for (int v : mesh_.faces[f].nodes) mean += u.segment<3>(3 * v);
    q += faces_[f].area * faces_[f].normal.dot(mean) / 3.0;
  }
  return q;
}

double P1Space::boundary_flux(const Eigen::VectorXd& u) const {
  double q = 0.0;
  for (int tag = kInletTag; tag < kFirstOutletTag + outlets_; ++tag) q += flux(u, tag);
  return q;
}

}  // namespace kflow::forward
