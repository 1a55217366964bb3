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

#include <gtest/gtest.h>

#include <cmath>

#include "kflow/error.hpp"
#include "kflow/forward/mesh_generation.hpp"
#include "kflow/forward/navier_stokes.hpp"

namespace {

using namespace kflow::forward;

ModelParameters resistance_params(double U, double Rp) {
  ModelParameters p;
  p.inflow.kind = PulseKind::Constant;
  p.inflow.U = U;
  p.inflow.spatial = InflowSpatial::StokesProfile;
  p.outlets = {WindkesselParams{Rp, std::nullopt, std::nullopt}};
  return p;
}

TEST(NavierStokes, RestStaysAtRest) {
  const NavierStokesModel m(make_tube_mesh({0.5, 2.0, 4, 3}));
  ModelParameters p = resistance_params(0.0, 100.0);
  auto s = m.zero_state();
  for (int j = 0; j < 5; ++j) s = m.step(s, p);
  EXPECT_EQ(s.u.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(s.p.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(s.t, 5e-3, 1e-15);
}

TEST(NavierStokes, PackUnpackRoundTrip) {
  const NavierStokesModel m(make_y_mesh({1.0, 1.0, 0.7, 1.3, 1.0, 1.0, 0.5}));
  FlowState s = m.zero_state();
  s.u.setLinSpaced(-1.0, 1.0);
  s.p.setLinSpaced(0.0, 5.0);
  s.pi << 100.0, 200.0;
  const auto r = m.unpack(m.pack(s), 0.25);
  EXPECT_EQ(r.u, s.u);
  EXPECT_EQ(r.p, s.p);
  EXPECT_EQ(r.pi, s.pi);
  EXPECT_EQ(r.t, 0.25);
  EXPECT_THROW(m.unpack(Eigen::VectorXd::Zero(3), 0.0), kflow::InvalidArgument);
}

TEST(NavierStokes, CorrectionRemovesALinearPressureGradientExactly) {
  const FluidProps props{1.2, 0.035};
  SolverConfig cfg;
  cfg.tau = 1e-3;
  const NavierStokesModel m(make_tube_mesh({0.5, 2.0, 4, 3}), props, cfg);
  const auto n = m.space().node_count();
  const Vec3 a(0.3, -0.7, 1.1);
  Eigen::VectorXd p(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) p[static_cast<Eigen::Index>(i)] = a.dot(m.mesh().nodes[i]) + 4.0;
  const Eigen::VectorXd u_tilde = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(3 * n), 0.5);
  const Eigen::VectorXd dirichlet = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(3 * n));
  const auto u = m.velocity_correction(u_tilde, p, dirichlet);
  const Vec3 expected = Vec3::Constant(0.5) - cfg.tau / props.rho * a;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 ui = u.segment<3>(static_cast<Eigen::Index>(3 * i));
    if (m.space().is_dirichlet(i)) {
      if (m.space().is_wall(i)) EXPECT_EQ(ui.norm(), 0.0);
    } else {
      EXPECT_NEAR((ui - expected).norm(), 0.0, 1e-10) << "node " << i;
    }
  }
}

TEST(NavierStokes, StokesInletShapeCarriesUnitMeanInflow) {
  const NavierStokesModel m(make_tube_mesh({0.5, 2.0, 6, 3}));
  const auto& shape = m.inlet_shape(InflowSpatial::StokesProfile);
  const double A = m.space().boundary_area(kInletTag);
  EXPECT_NEAR(-m.space().flux(shape, kInletTag), A, 1e-10 * A);
  const auto& plug = m.inlet_shape(InflowSpatial::PlugNormal);
  EXPECT_GT(-m.space().flux(plug, kInletTag), 0.0);
}

// Steady flow through the tube: the centreline speed approaches twice the mean
// inflow, the outlet flow matches the inlet flow and P = Rp Q at the outlet.
TEST(NavierStokes, SteadyPoiseuilleFlow) {
  const Mesh tube = make_tube_mesh();
  SolverConfig cfg;
  cfg.tau = 2e-3;
  const NavierStokesModel m(tube, FluidProps{1.0, 0.5}, cfg);
  const auto params = resistance_params(10.0, 100.0);
  const auto sys = m.pressure_system(params.outlets);
  auto s = m.zero_state();
  auto prev = s;
  for (int j = 0; j < 500; ++j) {
    prev = s;
    s = m.step(s, params, *sys);
  }
  double centre = 0.0;
  for (std::size_t i = 0; i < tube.nodes.size(); ++i) {
    const Vec3& x = tube.nodes[i];
    if (std::hypot(x.x(), x.y()) < 1e-9 && std::abs(x.z() - 2.0) < 0.35) centre = s.u[static_cast<Eigen::Index>(3 * i + 2)];
  }
  EXPECT_NEAR(centre, 20.0, 0.05 * 20.0);
  const double q_in = -m.space().flux(s.u, kInletTag);
  const auto q_out = m.coupled_outlet_flows(s.p, prev.pi, *sys);
  EXPECT_NEAR(q_out[0], q_in, 1e-3 * q_in);
  EXPECT_NEAR(m.outlet_pressure(s.p, 0), 100.0 * q_out[0], 1e-9 * 100.0 * q_out[0]);
  // Steady: the last step barely changes the velocity.
  EXPECT_LT((s.u - prev.u).norm(), 1e-6 * s.u.norm());
}

TEST(NavierStokes, WindkesselOutletsBalanceTheCoupledFlows) {
  const Mesh y = make_y_mesh({1.0, 1.0, 0.7, 1.3, 1.0, 1.0, 0.5});
  const NavierStokesModel m(y);
  ModelParameters params;
  params.outlets = {WindkesselParams{480.0, 7200.0, 4e-4}, WindkesselParams{200.0, 4800.0, 4e-4}};
  const auto sys = m.pressure_system(params.outlets);
  auto s = m.zero_state();
  for (int j = 0; j < 60; ++j) {
    const auto prev = s;
    s = m.step(s, params, *sys);
    const auto q = m.coupled_outlet_flows(s.p, prev.pi, *sys);
    const double q_in = -m.space().flux(s.u, kInletTag);
    if (j >= 10) EXPECT_NEAR(q[0] + q[1], q_in, 1e-3 * std::abs(q_in)) << "step " << j;
    for (int k = 0; k < 2; ++k)
      EXPECT_NEAR(s.pi[k], windkessel_update(prev.pi[k], m.outlet_pressure(s.p, k), params.outlets[static_cast<std::size_t>(k)], 1e-3),
                  1e-9 * (1.0 + std::abs(s.pi[k])));
  }
  EXPECT_GT(s.pi[0], 0.0);
  EXPECT_TRUE(s.u.allFinite());
}

TEST(NavierStokes, AdvanceMatchesRepeatedSteps) {
  const NavierStokesModel m(make_tube_mesh({0.5, 2.0, 4, 3}));
  ModelParameters params;
  params.outlets = {WindkesselParams{100.0, 1000.0, 1e-3}};
  Eigen::VectorXd x = m.initial_state();
  m.advance(x, params, 0.0, 4);
  auto s = m.zero_state();
  for (int j = 0; j < 4; ++j) s = m.step(s, params);
  EXPECT_LT((x - m.pack(s)).norm(), 1e-12 * (1.0 + x.norm()));
  EXPECT_THROW(params.validate(2), kflow::InvalidArgument);
}

}  // namespace
