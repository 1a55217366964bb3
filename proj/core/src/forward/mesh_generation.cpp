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

#include "kflow/forward/mesh_generation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "kflow/error.hpp"
#include "kflow/forward/mesh_topology.hpp"

namespace kflow::forward {
namespace {

using Corner = std::array<int, 3>;

// Six Kuhn tetrahedra of the unit cube along the diagonal 000 -> 111. When
// `flip[a]` is set, axis a runs backwards so the split mirrors across the cell.
std::array<std::array<Corner, 4>, 6> kuhn_split(const std::array<bool, 3>& flip) {
  static constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::array<std::array<Corner, 4>, 6> out{};
  for (std::size_t p = 0; p < kPerms.size(); ++p) {
    Corner c{0, 0, 0};
    out[p][0] = c;
    for (int s = 0; s < 3; ++s) {
      c[kPerms[p][s]] = 1;
      out[p][s + 1] = c;
    }
    for (auto& v : out[p])
      for (int a = 0; a < 3; ++a)
        if (flip[a]) v[a] = 1 - v[a];
  }
  return out;
}

// Builds a mesh from the active cells of a structured lattice of nodes.
class LatticeBuilder {
 public:
  LatticeBuilder(std::array<int, 3> node_dims, std::function<Vec3(int, int, int)> position)
      : dims_(node_dims), position_(std::move(position)) {}

  void add_cell(int i, int j, int k, const std::array<bool, 3>& flip) {
    for (const auto& tet : kuhn_split(flip)) {
      std::array<int, 4> t{};
      for (int v = 0; v < 4; ++v) t[v] = node(i + tet[v][0], j + tet[v][1], k + tet[v][2]);
      mesh_.tets.push_back(t);
    }
  }

  Mesh finish(const std::function<int(const Vec3& centroid, const Vec3& normal)>& classify) {
    mesh_.orient();
    mesh_.faces = boundary_faces(mesh_.tets);
    for (auto& f : mesh_.faces) {
      const Vec3& a = mesh_.nodes[f.nodes[0]];
      const Vec3& b = mesh_.nodes[f.nodes[1]];
      const Vec3& c = mesh_.nodes[f.nodes[2]];
      f.tag = classify((a + b + c) / 3.0, (b - a).cross(c - a).normalized());
    }
    mesh_.validate();
    return std::move(mesh_);
  }

 private:
  int node(int i, int j, int k) {
    const long key = (static_cast<long>(k) * dims_[1] + j) * dims_[0] + i;
    auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(mesh_.nodes.size()));
    if (inserted) mesh_.nodes.push_back(position_(i, j, k));
    return it->second;
  }

  std::array<int, 3> dims_;
  std::function<Vec3(int, int, int)> position_;
  std::map<long, int> ids_;
  Mesh mesh_;
};

double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

}  // namespace

Mesh make_tube_mesh(const TubeMeshSpec& spec) {
  if (!(spec.radius > 0.0) || !(spec.length > 0.0) || spec.cells_across < 2 ||
      spec.cells_across % 2 != 0 || spec.axial_cells < 1)
    throw InvalidArgument("make_tube_mesh: need radius, length > 0 and an even cells_across >= 2");
  const int n = spec.cells_across;
  const double L = spec.length;
  const auto position = [&](int i, int j, int k) {
    // Square [-1, 1]^2 mapped onto the unit disk.
    const double s = -1.0 + 2.0 * i / n;
    const double t = -1.0 + 2.0 * j / n;
    const double x = s * std::sqrt(1.0 - 0.5 * t * t);
    const double y = t * std::sqrt(1.0 - 0.5 * s * s);
    return Vec3(spec.radius * x, spec.radius * y, L * k / spec.axial_cells);
  };
  LatticeBuilder builder({n + 1, n + 1, spec.axial_cells + 1}, position);
  for (int k = 0; k < spec.axial_cells; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) builder.add_cell(i, j, k, {2 * i < n, 2 * j < n, false});
  const double eps = 1e-9 * L;
  return builder.finish([&](const Vec3& c, const Vec3&) {
    if (c.z() < eps) return kInletTag;
    if (c.z() > L - eps) return kFirstOutletTag;
    return kWallTag;
  });
}

Mesh make_y_mesh(const YMeshSpec& s) {
  if (!(s.trunk_radius > 0.0) || !(s.branch_radius > 0.0) || !(s.cell_size > 0.0) ||
      !(s.trunk_length > 0.0) || !(s.transition_length > 0.0) || !(s.branch_length > 0.0))
    throw InvalidArgument("make_y_mesh: lengths and radii must be positive");
  if (s.branch_offset <= s.branch_radius)
    throw InvalidArgument("make_y_mesh: branches overlap at the outlets");

  const double z_split = s.trunk_length;
  const double z_branch = z_split + s.transition_length;
  const double z_end = z_branch + s.branch_length;

  // Axis offset and radius of each branch tube as a function of z.
  const auto branch_axis = [&](double z) {
    const double w = smoothstep((z - z_split) / s.transition_length);
    return std::pair<double, double>{s.branch_offset * w,
                                     s.trunk_radius + (s.branch_radius - s.trunk_radius) * w};
  };
  const auto inside = [&](const Vec3& x) {
    if (x.z() <= z_split) return x.x() * x.x() + x.y() * x.y() <= s.trunk_radius * s.trunk_radius;
    const auto [off, r] = branch_axis(x.z());
    const double dx = std::abs(x.x()) - off;
    return dx * dx + x.y() * x.y() <= r * r;
  };

  const double h = s.cell_size;
  const double half_x = s.branch_offset + s.branch_radius + h;
  const double half_y = s.trunk_radius + h;
  const int nx = 2 * static_cast<int>(std::ceil(half_x / h));
  const int ny = 2 * static_cast<int>(std::ceil(half_y / h));
  const int nz = std::max(1, static_cast<int>(std::lround(z_end / h)));
  const double hz = z_end / nz;
  const auto position = [&](int i, int j, int k) {
    return Vec3(h * (i - nx / 2), h * (j - ny / 2), hz * k);
  };

  LatticeBuilder builder({nx + 1, ny + 1, nz + 1}, position);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec3 c = 0.5 * (position(i, j, k) + position(i + 1, j + 1, k + 1));
        if (inside(c)) builder.add_cell(i, j, k, {2 * i < nx, 2 * j < ny, false});
      }
  const double eps = 1e-9 * z_end;
  return builder.finish([&](const Vec3& c, const Vec3& normal) {
    if (c.z() < eps && normal.z() < -0.5) return kInletTag;
    if (c.z() > z_end - eps && normal.z() > 0.5) return c.x() > 0.0 ? kFirstOutletTag : kFirstOutletTag + 1;
    return kWallTag;
  });
}

}  // namespace kflow::forward
