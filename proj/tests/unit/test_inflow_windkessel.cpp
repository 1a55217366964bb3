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
#include <numbers>

#include "kflow/error.hpp"
#include "kflow/forward/inflow.hpp"
#include "kflow/forward/windkessel.hpp"

namespace {

using namespace kflow::forward;
using std::numbers::pi;

TEST(Inflow, AorticPulseShape) {
  const InflowProfile p;  // T 0.36, Tc 0.8, kappa 70
  EXPECT_DOUBLE_EQ(inflow_value(p, 0.0), 0.0);
  EXPECT_NEAR(inflow_value(p, 0.18), 1.0, 1e-15);
  EXPECT_NEAR(inflow_value(p, 0.36), 0.0, 1e-15);
  EXPECT_NEAR(inflow_value(p, 0.36 + 1e-9), 0.0, 1e-6);
  // The diastolic tail peaks at T + 1/kappa with value (pi/T) / (e kappa).
  const double t_star = 0.36 + 1.0 / 70.0;
  const double peak = (pi / 0.36) / (std::exp(1.0) * 70.0);
  EXPECT_NEAR(inflow_value(p, t_star), peak, 1e-14);
  EXPECT_LT(inflow_value(p, t_star - 1e-3), peak);
  EXPECT_LT(inflow_value(p, t_star + 1e-3), peak);
  for (double t : {0.05, 0.2, 0.5, 0.79}) EXPECT_NEAR(inflow_value(p, t + 0.8), inflow_value(p, t), 1e-12);
}

TEST(Inflow, PhantomPulseIsContinuousAtTheKnee) {
  InflowProfile p;
  p.kind = PulseKind::Phantom;
  p.T = 0.4;
  p.Tc = 1.0;
  p.beta = 5.0;
  const double knee = 0.3;
  EXPECT_NEAR(inflow_value(p, knee), std::sin(0.75 * pi), 1e-15);
  EXPECT_NEAR(inflow_value(p, knee + 1e-9), std::sin(0.75 * pi), 1e-7);
  const double t = 0.5;
  EXPECT_NEAR(inflow_value(p, t), std::sin(0.75 * pi) * (1.0 - t + knee) * std::exp(-(t - knee) * 5.0), 1e-15);
}

TEST(Inflow, ValidationAndNames) {
  InflowProfile p;
  EXPECT_THROW(inflow_value(p, -1e-3), kflow::InvalidArgument);
  p.T = 0.9;
  EXPECT_THROW(p.validate(), kflow::InvalidArgument);
  p.kind = PulseKind::Constant;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(inflow_value(p, 3.7), 1.0);
  EXPECT_EQ(pulse_kind_from_string("phantom"), PulseKind::Phantom);
  EXPECT_EQ(inflow_spatial_from_string("stokes"), InflowSpatial::StokesProfile);
  EXPECT_THROW(pulse_kind_from_string("square"), kflow::InvalidArgument);
}

TEST(Windkessel, CoefficientsAndOutletLaw) {
  const WindkesselParams w{480.0, 7200.0, 4e-4};
  const double tau = 1e-3;
  const auto c = windkessel_coefficients(w, tau);
  EXPECT_NEAR(c.alpha, 4e-4 / (4e-4 + tau / 7200.0), 1e-15);
  EXPECT_NEAR(c.beta, 1.0 / (4e-4 / tau + 1.0 / 7200.0), 1e-12);
  EXPECT_NEAR(c.gamma, 480.0 + c.beta, 1e-12);
  // Consistency: pi^j = alpha pi + beta Q and P = Rp Q + pi^j.
  const double pi_prev = 3000.0, P = 9000.0;
  const double Q = windkessel_flux(pi_prev, P, c);
  const double pi_next = windkessel_update(pi_prev, P, w, tau);
  EXPECT_NEAR(pi_next, c.alpha * pi_prev + c.beta * Q, 1e-9);
  EXPECT_NEAR(P, w.Rp * Q + pi_next, 1e-9);
  // Discrete C (pi^j - pi^{j-1}) / tau + pi^j / Rd = Q.
  EXPECT_NEAR(4e-4 * (pi_next - pi_prev) / tau + pi_next / 7200.0, Q, 1e-9);
}

TEST(Windkessel, ConstantFlowChargesLikeTheAnalyticSolution) {
  // Driving with constant Q: pi(t) = Rd Q (1 - exp(-t / (Rd C))).
  const WindkesselParams w{0.0, 1000.0, 1e-3};
  const double tau = 1e-4, Q = 5.0, RC = 1.0;
  const auto c = windkessel_coefficients(w, tau);
  double pi_j = 0.0;
  const int steps = 5000;
  for (int j = 0; j < steps; ++j) pi_j = c.alpha * pi_j + c.beta * Q;
  const double t = steps * tau;
  const double exact = 1000.0 * Q * (1.0 - std::exp(-t / RC));
  // Backward Euler is first order: the error stays below tau/RC of the scale.
  EXPECT_NEAR(pi_j, exact, 1000.0 * Q * tau / RC);
  EXPECT_NEAR(pi_j, 1000.0 * Q * (1.0 - std::pow(c.alpha, steps)), 1e-9);
}

TEST(Windkessel, ResistanceOutlet) {
  const WindkesselParams r{250.0, std::nullopt, std::nullopt};
  EXPECT_TRUE(r.is_resistance());
  const auto c = windkessel_coefficients(r, 1e-3);
  EXPECT_EQ(c.alpha, 0.0);
  EXPECT_EQ(c.beta, 0.0);
  EXPECT_EQ(c.gamma, 250.0);
  EXPECT_EQ(windkessel_update(10.0, 500.0, r, 1e-3), 0.0);
  EXPECT_DOUBLE_EQ(windkessel_flux(0.0, 500.0, c), 2.0);
}

TEST(Windkessel, Validation) {
  EXPECT_THROW((WindkesselParams{100.0, 10.0, std::nullopt}.validate()), kflow::InvalidArgument);
  EXPECT_THROW((WindkesselParams{100.0, -1.0, 1e-3}.validate()), kflow::InvalidArgument);
  EXPECT_THROW((WindkesselParams{0.0, std::nullopt, std::nullopt}.validate()), kflow::InvalidArgument);
  EXPECT_THROW(windkessel_coefficients(WindkesselParams{1.0, 1.0, 1.0}, 0.0), kflow::InvalidArgument);
}

}  // namespace
