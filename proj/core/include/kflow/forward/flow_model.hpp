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

#ifndef KFLOW_FORWARD_FLOW_MODEL_HPP_
#define KFLOW_FORWARD_FLOW_MODEL_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kflow/forward/inflow.hpp"
#include "kflow/forward/mesh.hpp"
#include "kflow/forward/windkessel.hpp"
#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::forward {

using imaging::ScalarField;
using imaging::VoxelGrid;

// Everything a forward run depends on besides the state: inflow (amplitude U
// and pulse shape) and one Windkessel per outlet.
struct ModelParameters {
  InflowProfile inflow;
  std::vector<WindkesselParams> outlets;

  void validate(int expected_outlets) const;
};

// Forward-model contract consumed by the filter. States are flat vectors whose
// layout is model specific; all methods are const and safe to call
// concurrently on distinct states.
class FlowModel {
 public:
  virtual ~FlowModel() = default;

  virtual std::string name() const = 0;
  virtual double time_step() const = 0;
  virtual int outlet_count() const = 0;

  // Fluid at rest at t = 0.
  virtual Eigen::VectorXd initial_state() const = 0;

  // Advances `state` from t0 by `steps` steps of time_step().
  virtual void advance(Eigen::VectorXd& state, const ModelParameters& params, double t0,
                       int steps) const = 0;

  // Velocity component along `direction` at each voxel center, 0 outside the lumen.
  virtual ScalarField observe_velocity(const Eigen::VectorXd& state, const Vec3& direction,
                                       const VoxelGrid& grid) const = 0;
  // 1 for voxels whose center lies in the lumen.
  virtual std::vector<std::uint8_t> lumen_mask(const VoxelGrid& grid) const = 0;

  // Velocity samples used by the trajectory error metric (nodal values for
  // meshes, lattice samples for the reduced model).
  virtual Eigen::VectorXd velocity_samples(const Eigen::VectorXd& state) const = 0;

  // Current flow through each outlet (cm^3/s, positive outward).
  virtual std::vector<double> outlet_flows(const Eigen::VectorXd& state) const = 0;

  virtual std::pair<Vec3, Vec3> bounding_box() const = 0;
};

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_FLOW_MODEL_HPP_
