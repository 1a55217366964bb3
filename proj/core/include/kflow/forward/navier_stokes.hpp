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

#ifndef KFLOW_FORWARD_NAVIER_STOKES_HPP_
#define KFLOW_FORWARD_NAVIER_STOKES_HPP_

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "kflow/forward/flow_model.hpp"
#include "kflow/forward/mesh.hpp"
#include "kflow/forward/p1_element.hpp"

namespace kflow::forward {

class Voxelizer;

struct FluidProps {
  double rho = 1.2;   // g/cm^3
  double mu = 0.035;  // P
  void validate() const;
};

struct SolverConfig {
  double tau = 1e-3;        // s
  double delta = 1.0;       // scale of the streamline stabilization
  double epsilon = 1e-2;    // tangential pressure-gradient stabilization on outlets
  double tolerance = 1e-8;  // relative residual of the viscous solve
  int max_iterations = 1000;
  void validate() const;
};

// u is interleaved (u[3i + c]); pi holds one value per outlet (0 for
// resistance outlets).
struct FlowState {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  Eigen::VectorXd pi;
  double t = 0.0;
};

// Factorized pressure operator for one set of outlet parameters.
struct PressureSystem {
  std::vector<WindkesselParams> outlets;
  std::vector<WindkesselCoefficients> coefficients;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
};

// Fractional-step P1/P1 solver with semi-implicit Windkessel coupling:
// viscous step, pressure projection coupled to the outlet laws, L2 velocity
// correction and Windkessel update.
class NavierStokesModel final : public FlowModel {
 public:
  NavierStokesModel(Mesh mesh, FluidProps props = {}, SolverConfig config = {});
  ~NavierStokesModel() override;

  const P1Space& space() const noexcept { return space_; }
  const Mesh& mesh() const noexcept { return space_.mesh(); }
  const FluidProps& props() const noexcept { return props_; }
  const SolverConfig& config() const noexcept { return config_; }

  FlowState zero_state() const;
  Eigen::VectorXd pack(const FlowState& s) const;
  FlowState unpack(const Eigen::VectorXd& x, double t) const;

  // Inlet Dirichlet data U f(t) * profile at every node (zero away from the inlet).
  Eigen::VectorXd inlet_velocity(const InflowProfile& inflow, double t) const;
  // Unit-amplitude spatial profile; the Stokes variant is solved on first use.
  const Eigen::VectorXd& inlet_shape(InflowSpatial spatial) const;

  // Tentative velocity at t^j from u^{j-1}; `dirichlet` carries the inlet
  // values at t^j (walls are always zero).
  Eigen::VectorXd viscous_step(const Eigen::VectorXd& u_prev, const Eigen::VectorXd& dirichlet) const;

  std::shared_ptr<const PressureSystem> pressure_system(
      const std::vector<WindkesselParams>& outlets) const;
  Eigen::VectorXd projection_windkessel_step(const Eigen::VectorXd& u_tilde,
                                             const Eigen::VectorXd& pi_prev,
                                             const PressureSystem& system) const;
  Eigen::VectorXd velocity_correction(const Eigen::VectorXd& u_tilde, const Eigen::VectorXd& p,
                                      const Eigen::VectorXd& dirichlet) const;
  // Mean pressure over outlet k (zero-based).
  double outlet_pressure(const Eigen::VectorXd& p, int k) const;
  // Outlet flows implied by the outlet laws: (P - alpha pi^{j-1}) / gamma.
  std::vector<double> coupled_outlet_flows(const Eigen::VectorXd& p, const Eigen::VectorXd& pi_prev,
                                           const PressureSystem& system) const;

  // One full time step from s (at s.t) to s.t + tau.
  FlowState step(const FlowState& s, const ModelParameters& params) const;
  FlowState step(const FlowState& s, const ModelParameters& params,
                 const PressureSystem& system) const;

  double kinetic_energy(const Eigen::VectorXd& u) const;

  // FlowModel
  std::string name() const override { return "navier-stokes"; }
  double time_step() const override { return config_.tau; }
  int outlet_count() const override { return space_.outlet_count(); }
  Eigen::VectorXd initial_state() const override;
  void advance(Eigen::VectorXd& state, const ModelParameters& params, double t0,
               int steps) const override;
  ScalarField observe_velocity(const Eigen::VectorXd& state, const Vec3& direction,
                               const VoxelGrid& grid) const override;
  std::vector<std::uint8_t> lumen_mask(const VoxelGrid& grid) const override;
  Eigen::VectorXd velocity_samples(const Eigen::VectorXd& state) const override;
  std::vector<double> outlet_flows(const Eigen::VectorXd& state) const override;
  std::pair<Vec3, Vec3> bounding_box() const override { return mesh().bounding_box(); }

 private:
  std::shared_ptr<const Voxelizer> voxelizer(const VoxelGrid& grid) const;
  void build_velocity_pattern();

  P1Space space_;
  FluidProps props_;
  SolverConfig config_;

  // Block sparsity of the velocity system: 3x3 blocks per node pair.
  Eigen::SparseMatrix<double, Eigen::RowMajor> pattern_;
  Eigen::VectorXd constant_values_;  // rho/tau mass + 2 mu strain part
  std::vector<std::array<int, 16>> tet_blocks_;  // rank of node b in node a's row
  std::vector<std::vector<int>> adjacency_;      // sorted neighbours, self included
  std::vector<int> diagonal_rank_;
  Eigen::SparseMatrix<double> outlet_surface_stiffness_;
  Eigen::SparseMatrix<double> gradient_;  // (3n x n): int phi_a d_i p
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mass_solver_;
  Eigen::VectorXd plug_shape_;

  mutable std::once_flag stokes_once_;
  mutable Eigen::VectorXd stokes_shape_;
  mutable std::mutex cache_mutex_;
  mutable std::vector<std::pair<VoxelGrid, std::shared_ptr<const Voxelizer>>> voxelizers_;
};

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_NAVIER_STOKES_HPP_
