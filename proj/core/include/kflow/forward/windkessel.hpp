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

#ifndef KFLOW_FORWARD_WINDKESSEL_HPP_
#define KFLOW_FORWARD_WINDKESSEL_HPP_

#include <optional>

namespace kflow::forward {

// Three-element Windkessel P = Rp Q + pi, C dpi/dt + pi/Rd = Q. A pure
// resistance outlet (P = Rp Q) leaves Rd and C empty.
struct WindkesselParams {
  double Rp = 0.0;               // dyn s cm^-5
  std::optional<double> Rd;      // dyn s cm^-5
  std::optional<double> C;       // cm^5 / dyn

  bool is_resistance() const noexcept { return !C.has_value(); }
  void validate() const;
};

// Backward-Euler coefficients of the outlet law over one step tau:
//   pi^j = alpha pi^{j-1} + beta Q^j,    alpha = C / (C + tau/Rd),
//                                        beta  = 1 / (C/tau + 1/Rd),
//   Q^j  = (P^j - alpha pi^{j-1}) / gamma,  gamma = Rp + beta.
// For a resistance outlet alpha = beta = 0 and gamma = Rp.
struct WindkesselCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

WindkesselCoefficients windkessel_coefficients(const WindkesselParams& params, double tau);

// pi^j = (alpha - alpha beta / gamma) pi^{j-1} + (beta / gamma) P^j.
// Identity (returns 0) for resistance outlets.
double windkessel_update(double pi_prev, double P_outlet, const WindkesselParams& params,
                         double tau);

// Outlet flux implied by the outlet pressure: Q = (P - alpha pi^{j-1}) / gamma.
double windkessel_flux(double pi_prev, double P_outlet, const WindkesselCoefficients& c);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_WINDKESSEL_HPP_
