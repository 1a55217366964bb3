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

#ifndef KFLOW_FORWARD_STOKES_PROFILE_HPP_
#define KFLOW_FORWARD_STOKES_PROFILE_HPP_

#include <Eigen/Core>

#include "kflow/forward/mesh.hpp"
#include "kflow/forward/p1_element.hpp"

namespace kflow::forward {

// Steady Stokes flow driven by a uniform pressure on the inlet, with no-slip
// walls and traction-free outlets, solved with stabilized P1/P1 elements.
// Returns the interleaved nodal velocity restricted to the inlet (zero
// elsewhere), scaled so its mean inflow u.(-n) over the inlet is 1.
Eigen::VectorXd solve_stokes_profile(const P1Space& space);
Eigen::VectorXd solve_stokes_profile(const Mesh& mesh);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_STOKES_PROFILE_HPP_
