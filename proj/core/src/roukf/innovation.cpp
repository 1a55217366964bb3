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

#include "kflow/roukf/innovation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kflow/error.hpp"
#include "kflow/imaging/encoding.hpp"
#include "kflow/imaging/fourier.hpp"

namespace kflow::roukf {

InnovationKind innovation_kind_from_string(std::string_view s) {
  if (s == "velocity") return InnovationKind::Velocity;
  if (s == "wrapped") return InnovationKind::WrappedVelocity;
  if (s == "kspace") return InnovationKind::KSpace;
  throw InvalidArgument("unknown innovation kind '" + std::string(s) + "'");
}

const char* to_string(InnovationKind k) {
  switch (k) {
    case InnovationKind::Velocity: return "velocity";
    case InnovationKind::WrappedVelocity: return "wrapped";
    case InnovationKind::KSpace: return "kspace";
  }
  return "unknown";
}

Eigen::VectorXd innovation_velocity(const ScalarField& V, const ScalarField& Hu) {
  imaging::require_same_grid(V.grid, Hu.grid, "innovation_velocity");
  imaging::require_consistent(V, "innovation_velocity");
  imaging::require_consistent(Hu, "innovation_velocity");
  Eigen::VectorXd r(static_cast<Eigen::Index>(V.size()));
  for (std::size_t n = 0; n < V.size(); ++n) r[static_cast<Eigen::Index>(n)] = V[n] - Hu[n];
  return r;
}

Eigen::VectorXd innovation_wrapped(const ScalarField& V, const ScalarField& Hu, double venc) {
  if (!(venc > 0.0)) throw InvalidArgument("innovation_wrapped: venc must be > 0");
  Eigen::VectorXd r = innovation_velocity(V, Hu);
  const double k = std::numbers::pi / venc;
  for (Eigen::Index n = 0; n < r.size(); ++n) r[n] = std::sin(k * r[n]) / k;
  return r;
}

Eigen::VectorXd innovation_kspace(const ComplexField& Y, const ScalarField& u_model,
                                  const ScalarField& magnitude, const ScalarField& phi_back,
                                  double venc, const SamplingMask& mask) {
  imaging::require_same_grid(Y.grid, mask.grid, "innovation_kspace");
  const ComplexField H = imaging::dft3(imaging::encode_magnetization(magnitude, u_model, phi_back, venc));
  imaging::require_same_grid(H.grid, Y.grid, "innovation_kspace");
  const std::size_t m = mask.count();
  Eigen::VectorXd r(static_cast<Eigen::Index>(2 * m));
  Eigen::Index j = 0;
  for (std::size_t n = 0; n < Y.size(); ++n) {
    if (!mask.selected[n]) continue;
    const auto d = Y[n] - H[n];
    r[j] = d.real();
    r[static_cast<Eigen::Index>(m) + j] = d.imag();
    ++j;
  }
  return r;
}

StackedInnovation stack_coils(const std::vector<CoilChannel>& coils, const std::vector<ComplexField>& Y,
                              const ScalarField& u_model, double venc, const SamplingMask& mask) {
  if (coils.empty()) throw InvalidArgument("stack_coils: needs at least one coil");
  if (coils.size() != Y.size()) throw InvalidArgument("stack_coils: one measurement per coil");
  const auto block = static_cast<Eigen::Index>(2 * mask.count());
  StackedInnovation out;
  out.residual.resize(block * static_cast<Eigen::Index>(coils.size()));
  out.inverse_weights.resize(out.residual.size());
  for (std::size_t c = 0; c < coils.size(); ++c) {
    if (!(coils[c].sigma > 0.0)) throw InvalidArgument("stack_coils: sigma must be > 0");
    imaging::require_same_grid(coils[c].magnitude.grid, coils.front().magnitude.grid, "stack_coils");
    const auto offset = block * static_cast<Eigen::Index>(c);
    out.residual.segment(offset, block) =
        innovation_kspace(Y[c], u_model, coils[c].magnitude, coils[c].phi_back, venc, mask);
    out.inverse_weights.segment(offset, block).setConstant(1.0 / (coils[c].sigma * coils[c].sigma));
  }
  return out;
}

std::vector<double> MeasurementSeries::times() const {
  std::vector<double> t;
  t.reserve(frames.size());
  for (const auto& f : frames) t.push_back(f.time);
  return t;
}

void MeasurementSeries::validate() const {
  if (directions.empty()) throw InvalidArgument("MeasurementSeries: no encoding directions");
  for (const auto& d : directions)
    if (std::abs(d.norm() - 1.0) > 1e-9) throw InvalidArgument("MeasurementSeries: directions must be unit vectors");
  const bool kspace = is_kspace();
  const imaging::VoxelGrid* grid = nullptr;
  for (std::size_t n = 0; n < frames.size(); ++n) {
    const auto& f = frames[n];
    if (n > 0 && !(f.time > frames[n - 1].time))
      throw InvalidArgument("MeasurementSeries: times must be strictly increasing");
    if (kspace) {
      if (f.kspace.size() != directions.size() || f.mask_index.size() != directions.size())
        throw InvalidArgument("MeasurementSeries: one k-space entry and mask per direction");
      for (std::size_t d = 0; d < f.kspace.size(); ++d) {
        if (f.mask_index[d] >= masks.size()) throw InvalidArgument("MeasurementSeries: bad mask index");
        const auto& mask = masks[f.mask_index[d]];
        if (f.kspace[d].empty() || f.kspace[d].size() != f.kspace.front().size())
          throw InvalidArgument("MeasurementSeries: coil count must be constant");
        for (const auto& y : f.kspace[d]) {
          imaging::require_same_grid(y.grid, mask.grid, "MeasurementSeries");
          if (!grid) grid = &y.grid;
          imaging::require_same_grid(y.grid, *grid, "MeasurementSeries");
          for (std::size_t v = 0; v < y.size(); ++v)
            if (!mask.selected[v] && y[v] != imaging::Complex(0.0, 0.0))
              throw InvalidArgument("MeasurementSeries: k-space data outside the mask");
        }
      }
    } else {
      if (f.velocity.size() != directions.size())
        throw InvalidArgument("MeasurementSeries: one velocity field per direction");
      for (const auto& v : f.velocity) {
        imaging::require_consistent(v, "MeasurementSeries");
        if (!grid) grid = &v.grid;
        imaging::require_same_grid(v.grid, *grid, "MeasurementSeries");
      }
    }
  }
}

void InnovationSpec::validate() const {
  switch (kind) {
    case InnovationKind::Velocity:
      if (!(sigma > 0.0)) throw InvalidArgument("InnovationSpec: sigma must be > 0");
      break;
    case InnovationKind::WrappedVelocity:
      if (!(sigma > 0.0) || !(venc > 0.0))
        throw InvalidArgument("InnovationSpec: wrapped innovation needs sigma and venc > 0");
      break;
    case InnovationKind::KSpace:
      if (!(venc > 0.0)) throw InvalidArgument("InnovationSpec: k-space innovation needs venc > 0");
      if (coils.empty()) throw InvalidArgument("InnovationSpec: k-space innovation needs M and phi_back");
      for (const auto& c : coils) {
        if (!(c.sigma > 0.0)) throw InvalidArgument("InnovationSpec: sigma must be > 0 for every coil");
        imaging::require_consistent(c.magnitude, "InnovationSpec");
        imaging::require_same_grid(c.magnitude.grid, c.phi_back.grid, "InnovationSpec");
      }
      break;
  }
}

}  // namespace kflow::roukf
