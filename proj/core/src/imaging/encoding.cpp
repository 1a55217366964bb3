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

#include "kflow/imaging/encoding.hpp"

#include <cmath>
#include <numbers>

#include "kflow/error.hpp"

namespace kflow::imaging {

double wrap_phase(double angle) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(angle, two_pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

ComplexField encode_magnetization(const ScalarField& magnitude, const ScalarField& velocity,
                                  const ScalarField& phi_back, double venc) {
  require_consistent(magnitude, "encode_magnetization");
  require_same_grid(magnitude.grid, velocity.grid, "encode_magnetization");
  require_same_grid(magnitude.grid, phi_back.grid, "encode_magnetization");
  if (!(venc > 0.0)) throw InvalidArgument("encode_magnetization: venc must be positive");
  const double k = std::numbers::pi / venc;
  ComplexField out(magnitude.grid);
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = std::polar(magnitude[n], k * velocity[n] + phi_back[n]);
  return out;
}

ScalarField phase_difference_velocity(const ComplexField& m_enc, const ScalarField& phi_back,
                                      double venc) {
  require_consistent(m_enc, "phase_difference_velocity");
  require_same_grid(m_enc.grid, phi_back.grid, "phase_difference_velocity");
  if (!(venc > 0.0)) throw InvalidArgument("phase_difference_velocity: venc must be positive");
  ScalarField u(m_enc.grid, 0.0);
  const double scale = venc / std::numbers::pi;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (m_enc[n] == Complex(0.0, 0.0)) continue;
    double v = wrap_phase(std::arg(m_enc[n]) - phi_back[n]) * scale;
    // The wrap is onto (-pi, pi]; the velocity range is [-venc, venc).
    if (v >= venc) v -= 2.0 * venc;
    u[n] = v;
  }
  return u;
}

ScalarField magnitude_of(const ComplexField& m) {
  ScalarField out(m.grid);
  for (std::size_t n = 0; n < m.size(); ++n) out[n] = std::abs(m[n]);
  return out;
}

ScalarField phase_of(const ComplexField& m) {
  ScalarField out(m.grid);
  for (std::size_t n = 0; n < m.size(); ++n) out[n] = std::arg(m[n]);
  return out;
}

}  // namespace kflow::imaging
