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

#include "kflow/forward/stokes_profile.hpp"

#include <Eigen/SparseLU>

#include "kflow/error.hpp"

namespace kflow::forward {
namespace {

// Brezzi-Pitkaranta pressure stabilization weight (times h^2 / mu).
constexpr double kPressureStabilization = 0.1;

}  // namespace

Eigen::VectorXd solve_stokes_profile(const P1Space& space) {
  const Mesh& mesh = space.mesh();
  const int n = static_cast<int>(space.node_count());
  const int N = 4 * n;
  const double mu = 1.0;  // the normalized profile does not depend on mu

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(mesh.tets.size() * 16 * 10);
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const auto& t = mesh.tets[e];
    const auto& g = space.tets()[e];
    const double bp = kPressureStabilization * g.h * g.h / mu;
    for (int a = 0; a < 4; ++a) {
      const bool fixed = space.is_wall(static_cast<std::size_t>(t[a]));
      for (int b = 0; b < 4; ++b) {
        const double gg = g.volume * g.grad[a].dot(g.grad[b]);
        for (int i = 0; i < 3; ++i) {
          if (!fixed) {
            entries.emplace_back(3 * t[a] + i, 3 * t[b] + i, mu * gg);
            entries.emplace_back(3 * t[a] + i, 3 * n + t[b], -0.25 * g.volume * g.grad[a][i]);
          }
          entries.emplace_back(3 * n + t[b], 3 * t[a] + i, -0.25 * g.volume * g.grad[a][i]);
        }
        entries.emplace_back(3 * n + t[a], 3 * n + t[b], -bp * gg);
      }
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  for (int a = 0; a < n; ++a)
    if (space.is_wall(static_cast<std::size_t>(a)))
      for (int i = 0; i < 3; ++i) entries.emplace_back(3 * a + i, 3 * a + i, 1.0);
  // Unit pressure on the inlet: -(P n, v).
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.faces[f].tag != kInletTag) continue;
    const auto& fg = space.faces()[f];
    for (int v : mesh.faces[f].nodes) {
      if (space.is_wall(static_cast<std::size_t>(v))) continue;
      rhs.segment<3>(3 * v) -= (fg.area / 3.0) * fg.normal;
    }
  }

  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(entries.begin(), entries.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("solve_stokes_profile: singular system");
  const Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw SolverError("solve_stokes_profile: solve failed");

  Eigen::VectorXd profile = Eigen::VectorXd::Zero(3 * n);
  for (int a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if ((space.node_flags()[i] & kNodeInlet) && !space.is_wall(i))
      profile.segment<3>(3 * a) = x.segment<3>(3 * a);
  }
  const double mean_inflow = -space.flux(profile, kInletTag) / space.boundary_area(kInletTag);
  if (!(mean_inflow > 0.0)) throw SolverError("solve_stokes_profile: no inflow through the inlet");
  return profile / mean_inflow;
}

Eigen::VectorXd solve_stokes_profile(const Mesh& mesh) { return solve_stokes_profile(P1Space(mesh)); }

}  // namespace kflow::forward
