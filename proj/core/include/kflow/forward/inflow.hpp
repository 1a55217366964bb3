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

#ifndef KFLOW_FORWARD_INFLOW_HPP_
#define KFLOW_FORWARD_INFLOW_HPP_

#include <string_view>

namespace kflow::forward {

enum class PulseKind {
  Aortic,    // sin(pi t/T) up to T, then (pi/T)(t-T) exp(-kappa (t-T)) until Tc
  Phantom,   // sin(pi t/T) up to 3T/4, then damped linear decay with rate beta
  Constant,  // f = 1, for steady-state runs
};

enum class InflowSpatial {
  PlugNormal,     // u_in = -U f(t) n
  StokesProfile,  // u_in = U f(t) * normalized steady Stokes inlet profile
};

struct InflowProfile {
  PulseKind kind = PulseKind::Aortic;
  double U = 75.0;      // cm/s
  double T = 0.36;      // s
  double Tc = 0.80;     // cycle length (s); the pulse repeats with this period
  double kappa = 70.0;  // 1/s
  double beta = 5.0;
  InflowSpatial spatial = InflowSpatial::PlugNormal;

  void validate() const;
};

// Temporal factor f(t) (without the amplitude U). Throws for t < 0.
double inflow_value(const InflowProfile& profile, double t);

PulseKind pulse_kind_from_string(std::string_view s);
InflowSpatial inflow_spatial_from_string(std::string_view s);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_INFLOW_HPP_
