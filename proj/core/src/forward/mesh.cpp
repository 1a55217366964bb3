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

#include "kflow/forward/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "kflow/error.hpp"
#include "kflow/forward/mesh_topology.hpp"

namespace kflow::forward {

int Mesh::outlet_count() const {
  int max_tag = kWallTag;
  for (const auto& f : faces) max_tag = std::max(max_tag, f.tag);
  return max_tag - kWallTag;
}

double Mesh::tet_volume(std::size_t e) const {
  const auto& t = tets[e];
  const Vec3 a = nodes[t[1]] - nodes[t[0]];
  const Vec3 b = nodes[t[2]] - nodes[t[0]];
  const Vec3 c = nodes[t[3]] - nodes[t[0]];
  return a.dot(b.cross(c)) / 6.0;
}

std::pair<Vec3, Vec3> Mesh::bounding_box() const {
  if (nodes.empty()) throw InvalidArgument("Mesh: no nodes");
  Vec3 lo = nodes.front();
  Vec3 hi = nodes.front();
  for (const auto& x : nodes) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  return {lo, hi};
}

void Mesh::orient() {
  for (std::size_t e = 0; e < tets.size(); ++e)
    if (tet_volume(e) < 0.0) std::swap(tets[e][2], tets[e][3]);
}

void Mesh::validate() const {
  const int n = static_cast<int>(nodes.size());
  if (n < 4 || tets.empty()) throw InvalidArgument("Mesh: needs at least one tetrahedron");
  for (const auto& x : nodes)
    if (!x.allFinite()) throw InvalidArgument("Mesh: non-finite node coordinate");
  for (std::size_t e = 0; e < tets.size(); ++e) {
    for (int v : tets[e])
      if (v < 0 || v >= n) throw InvalidArgument("Mesh: tetrahedron index out of range");
    if (!(tet_volume(e) > 0.0))
      throw InvalidArgument("Mesh: tetrahedron " + std::to_string(e) + " has non-positive volume");
  }

  std::set<std::array<int, 3>> boundary;
  for (const auto& f : boundary_faces(tets)) {
    auto key = f.nodes;
    std::sort(key.begin(), key.end());
    boundary.insert(key);
  }
  std::set<std::array<int, 3>> seen;
  std::set<int> tags;
  for (const auto& f : faces) {
    auto key = f.nodes;
    std::sort(key.begin(), key.end());
    if (!boundary.count(key)) throw InvalidArgument("Mesh: tagged face is not a boundary face");
    if (!seen.insert(key).second) throw InvalidArgument("Mesh: boundary face tagged twice");
    if (f.tag < kInletTag) throw InvalidArgument("Mesh: invalid boundary tag");
    tags.insert(f.tag);
  }
  if (seen.size() != boundary.size()) throw InvalidArgument("Mesh: untagged boundary faces");
  if (!tags.count(kInletTag)) throw InvalidArgument("Mesh: no inlet faces");
  const int K = outlet_count();
  if (K < 1) throw InvalidArgument("Mesh: no outlet faces");
  for (int k = 0; k < K; ++k)
    if (!tags.count(kFirstOutletTag + k)) throw InvalidArgument("Mesh: outlet tags must be contiguous");
}

std::vector<BoundaryFace> boundary_faces(const std::vector<std::array<int, 4>>& tets) {
  // Local faces listed so that, for a positively oriented tet, the normal
  // (b - a) x (c - a) points outward.
  static constexpr int kLocal[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  std::map<std::array<int, 3>, std::pair<int, BoundaryFace>> count;
  for (const auto& t : tets) {
    for (const auto& lf : kLocal) {
      BoundaryFace f{{t[lf[0]], t[lf[1]], t[lf[2]]}, kWallTag};
      auto key = f.nodes;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = count.try_emplace(key, 0, f);
      ++it->second.first;
    }
  }
  std::vector<BoundaryFace> out;
  for (const auto& [key, entry] : count) {
    if (entry.first > 2) throw InvalidArgument("Mesh: face shared by more than two tetrahedra");
    if (entry.first == 1) out.push_back(entry.second);
  }
  return out;
}

}  // namespace kflow::forward
