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

#include "kflow/forward/inflow.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kflow/error.hpp"

namespace kflow::forward {

void InflowProfile::validate() const {
  if (!std::isfinite(U)) throw InvalidArgument("InflowProfile: U must be finite");
  if (kind == PulseKind::Constant) return;
  if (!(T > 0.0) || !(Tc > 0.0)) throw InvalidArgument("InflowProfile: T and Tc must be positive");
  if (kind == PulseKind::Aortic && !(T < Tc))
    throw InvalidArgument("InflowProfile: need 0 < T < Tc for the aortic pulse");
  if (kind == PulseKind::Phantom && !(0.75 * T < Tc))
    throw InvalidArgument("InflowProfile: need 3T/4 < Tc for the phantom pulse");
  if (!(kappa >= 0.0) || !(beta >= 0.0))
    throw InvalidArgument("InflowProfile: decay rates must be >= 0");
}

double inflow_value(const InflowProfile& p, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("inflow_value: t must be >= 0");
  using std::numbers::pi;
  switch (p.kind) {
    case PulseKind::Constant:
      return 1.0;
    case PulseKind::Aortic: {
      const double s = std::fmod(t, p.Tc);
      if (s <= p.T) return std::sin(pi * s / p.T);
      return (pi / p.T) * (s - p.T) * std::exp(-p.kappa * (s - p.T));
    }
    case PulseKind::Phantom: {
      const double s = std::fmod(t, p.Tc);
      const double knee = 0.75 * p.T;
      if (s <= knee) return std::sin(pi * s / p.T);
      return std::sin(0.75 * pi) * (1.0 - s + knee) * std::exp(-(s - knee) * p.beta);
    }
  }
  throw InvalidArgument("inflow_value: unknown pulse kind");
}

PulseKind pulse_kind_from_string(std::string_view s) {
  if (s == "aortic") return PulseKind::Aortic;
  if (s == "phantom") return PulseKind::Phantom;
  if (s == "constant") return PulseKind::Constant;
  throw InvalidArgument("unknown pulse kind '" + std::string(s) + "'");
}

InflowSpatial inflow_spatial_from_string(std::string_view s) {
  if (s == "plug") return InflowSpatial::PlugNormal;
  if (s == "stokes") return InflowSpatial::StokesProfile;
  throw InvalidArgument("unknown inflow profile '" + std::string(s) + "'");
}

}  // namespace kflow::forward
