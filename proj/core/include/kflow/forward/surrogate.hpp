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

#ifndef KFLOW_FORWARD_SURROGATE_HPP_
#define KFLOW_FORWARD_SURROGATE_HPP_

#include <vector>

#include "kflow/forward/flow_model.hpp"

namespace kflow::forward {

struct SurrogateBranch {
  double x_offset = 0.0;
  double radius = 0.7;
};

struct SurrogateGeometry {
  double trunk_radius = 1.0;
  double trunk_length = 3.0;
  double branch_length = 3.0;
  std::vector<SurrogateBranch> branches{{1.3, 0.7}, {-1.3, 0.7}};
  double sample_spacing = 0.25;  // lattice of velocity samples
  void validate() const;
};

// Reduced 0D network standing in for the finite-element model in filter
// tests: the inflow U f(t) A_in splits among K parallel Windkessel branches.
// To be observable through images it carries a simple tube phantom, a trunk
// along +z followed by one straight branch per outlet, each with a Poiseuille
// profile of its current flow.
//
// State layout: [Q_1..Q_K, pi_1..pi_K].
class SurrogateModel final : public FlowModel {
 public:
  explicit SurrogateModel(SurrogateGeometry geometry = {}, double tau = 1e-3);

  const SurrogateGeometry& geometry() const noexcept { return geometry_; }
  double inlet_area() const noexcept;

  // One exact backward-Euler step of the network from t - tau to t.
  Eigen::VectorXd step(const Eigen::VectorXd& state, const ModelParameters& params, double t) const;
  // Pressure at the branching node implied by the step to t.
  double node_pressure(const Eigen::VectorXd& state_prev, const ModelParameters& params, double t) const;

  // Velocity vector at a point (zero outside the phantom).
  Vec3 velocity_at(const Eigen::VectorXd& state, const Vec3& x) const;
  bool contains(const Vec3& x) const;

  // FlowModel
  std::string name() const override { return "surrogate"; }
  double time_step() const override { return tau_; }
  int outlet_count() const override { return static_cast<int>(geometry_.branches.size()); }
  Eigen::VectorXd initial_state() const override;
  void advance(Eigen::VectorXd& state, const ModelParameters& params, double t0,
               int steps) const override;
  ScalarField observe_velocity(const Eigen::VectorXd& state, const Vec3& direction,
                               const VoxelGrid& grid) const override;
  std::vector<std::uint8_t> lumen_mask(const VoxelGrid& grid) const override;
  Eigen::VectorXd velocity_samples(const Eigen::VectorXd& state) const override;
  std::vector<double> outlet_flows(const Eigen::VectorXd& state) const override;
  std::pair<Vec3, Vec3> bounding_box() const override;

 private:
  // Segment 0 is the trunk, segment k + 1 is branch k; -1 outside.
  int segment_of(const Vec3& x, double& rho2_over_r2) const;

  SurrogateGeometry geometry_;
  double tau_;
  std::vector<Vec3> samples_;
};

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_SURROGATE_HPP_
