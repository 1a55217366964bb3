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

#include "kflow/forward/windkessel.hpp"

#include <cmath>

#include "kflow/error.hpp"

namespace kflow::forward {

void WindkesselParams::validate() const {
  if (!(Rp >= 0.0) || !std::isfinite(Rp)) throw InvalidArgument("Windkessel: Rp must be >= 0");
  if (C.has_value() != Rd.has_value())
    throw InvalidArgument("Windkessel: Rd and C must be given together");
  if (C) {
    if (!(*C > 0.0) || !std::isfinite(*C)) throw InvalidArgument("Windkessel: C must be > 0");
    if (!(*Rd > 0.0) || !std::isfinite(*Rd)) throw InvalidArgument("Windkessel: Rd must be > 0");
  } else if (!(Rp > 0.0)) {
    throw InvalidArgument("Windkessel: a resistance outlet needs Rp > 0");
  }
}

WindkesselCoefficients windkessel_coefficients(const WindkesselParams& w, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("windkessel_coefficients: tau must be > 0");
  w.validate();
  if (w.is_resistance()) return {0.0, 0.0, w.Rp};
  const double C = *w.C;
  const double Rd = *w.Rd;
  WindkesselCoefficients c;
  c.alpha = C / (C + tau / Rd);
  c.beta = 1.0 / (C / tau + 1.0 / Rd);
  c.gamma = w.Rp + c.beta;
  return c;
}

double windkessel_update(double pi_prev, double P_outlet, const WindkesselParams& w, double tau) {
  if (w.is_resistance()) {
    w.validate();
    return 0.0;
  }
  const auto c = windkessel_coefficients(w, tau);
  return (c.alpha - c.alpha * c.beta / c.gamma) * pi_prev + (c.beta / c.gamma) * P_outlet;
}

double windkessel_flux(double pi_prev, double P_outlet, const WindkesselCoefficients& c) {
  return (P_outlet - c.alpha * pi_prev) / c.gamma;
}

}  // namespace kflow::forward
