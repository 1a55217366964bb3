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

#include "kflow/forward/surrogate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kflow/error.hpp"

namespace kflow::forward {

void SurrogateGeometry::validate() const {
  if (!(trunk_radius > 0.0) || !(trunk_length > 0.0) || !(branch_length > 0.0) ||
      !(sample_spacing > 0.0))
    throw InvalidArgument("SurrogateModel: lengths and radii must be positive");
  if (branches.empty()) throw InvalidArgument("SurrogateModel: needs at least one branch");
  for (std::size_t k = 0; k < branches.size(); ++k) {
    if (!(branches[k].radius > 0.0)) throw InvalidArgument("SurrogateModel: branch radius must be > 0");
    for (std::size_t l = 0; l < k; ++l)
      if (std::abs(branches[k].x_offset - branches[l].x_offset) < branches[k].radius + branches[l].radius)
        throw InvalidArgument("SurrogateModel: branches overlap");
  }
}

SurrogateModel::SurrogateModel(SurrogateGeometry geometry, double tau) : geometry_(std::move(geometry)), tau_(tau) {
  geometry_.validate();
  if (!(tau_ > 0.0)) throw InvalidArgument("SurrogateModel: tau must be > 0");
  const auto [lo, hi] = bounding_box();
  const double h = geometry_.sample_spacing;
  for (double z = lo.z() + 0.5 * h; z < hi.z(); z += h)
    for (double y = lo.y() + 0.5 * h; y < hi.y(); y += h)
      for (double x = lo.x() + 0.5 * h; x < hi.x(); x += h)
        if (contains(Vec3(x, y, z))) samples_.emplace_back(x, y, z);
}

double SurrogateModel::inlet_area() const noexcept {
  return std::numbers::pi * geometry_.trunk_radius * geometry_.trunk_radius;
}

Eigen::VectorXd SurrogateModel::initial_state() const {
  return Eigen::VectorXd::Zero(2 * outlet_count());
}

double SurrogateModel::node_pressure(const Eigen::VectorXd& x, const ModelParameters& params,
                                     double t) const {
  const int K = outlet_count();
  const double q_in = params.inflow.U * inflow_value(params.inflow, t) * inlet_area();
  double conductance = 0.0;
  double source = q_in;
  for (int k = 0; k < K; ++k) {
    const auto c = windkessel_coefficients(params.outlets[static_cast<std::size_t>(k)], tau_);
    conductance += 1.0 / c.gamma;
    source += c.alpha * x[K + k] / c.gamma;
  }
  return source / conductance;
}

Eigen::VectorXd SurrogateModel::step(const Eigen::VectorXd& x, const ModelParameters& params,
                                     double t) const {
  const int K = outlet_count();
  if (x.size() != 2 * K) throw InvalidArgument("SurrogateModel: state has wrong size");
  params.validate(K);
  const double P = node_pressure(x, params, t);
  Eigen::VectorXd next(2 * K);
  for (int k = 0; k < K; ++k) {
    const auto& w = params.outlets[static_cast<std::size_t>(k)];
    const auto c = windkessel_coefficients(w, tau_);
    next[k] = windkessel_flux(x[K + k], P, c);
    next[K + k] = windkessel_update(x[K + k], P, w, tau_);
  }
  return next;
}

void SurrogateModel::advance(Eigen::VectorXd& state, const ModelParameters& params, double t0,
                             int steps) const {
  if (steps < 0) throw InvalidArgument("advance: negative step count");
  for (int j = 0; j < steps; ++j) state = step(state, params, t0 + (j + 1) * tau_);
  if (!state.allFinite()) throw SolverError("SurrogateModel: non-finite state");
}

int SurrogateModel::segment_of(const Vec3& x, double& rho2_over_r2) const {
  const double z_end = geometry_.trunk_length + geometry_.branch_length;
  if (x.z() < 0.0 || x.z() > z_end) return -1;
  if (x.z() <= geometry_.trunk_length) {
    const double r = geometry_.trunk_radius;
    rho2_over_r2 = (x.x() * x.x() + x.y() * x.y()) / (r * r);
    return rho2_over_r2 <= 1.0 ? 0 : -1;
  }
  for (std::size_t k = 0; k < geometry_.branches.size(); ++k) {
    const auto& b = geometry_.branches[k];
    const double dx = x.x() - b.x_offset;
    rho2_over_r2 = (dx * dx + x.y() * x.y()) / (b.radius * b.radius);
    if (rho2_over_r2 <= 1.0) return static_cast<int>(k) + 1;
  }
  return -1;
}

bool SurrogateModel::contains(const Vec3& x) const {
  double s = 0.0;
  return segment_of(x, s) >= 0;
}

Vec3 SurrogateModel::velocity_at(const Eigen::VectorXd& state, const Vec3& x) const {
  double s = 0.0;
  const int seg = segment_of(x, s);
  if (seg < 0) return Vec3::Zero();
  const int K = outlet_count();
  double q = 0.0;
  double r = geometry_.trunk_radius;
  if (seg == 0) {
    for (int k = 0; k < K; ++k) q += state[k];
  } else {
    q = state[seg - 1];
    r = geometry_.branches[static_cast<std::size_t>(seg - 1)].radius;
  }
  return Vec3(0.0, 0.0, 2.0 * q / (std::numbers::pi * r * r) * (1.0 - s));
}

ScalarField SurrogateModel::observe_velocity(const Eigen::VectorXd& state, const Vec3& direction,
                                             const VoxelGrid& grid) const {
  ScalarField out(grid, 0.0);
  for (std::size_t v = 0; v < grid.size(); ++v) out[v] = velocity_at(state, grid.center(v)).dot(direction);
  return out;
}

std::vector<std::uint8_t> SurrogateModel::lumen_mask(const VoxelGrid& grid) const {
  std::vector<std::uint8_t> inside(grid.size(), 0);
  for (std::size_t v = 0; v < grid.size(); ++v) inside[v] = contains(grid.center(v)) ? 1 : 0;
  return inside;
}

Eigen::VectorXd SurrogateModel::velocity_samples(const Eigen::VectorXd& state) const {
  Eigen::VectorXd out(3 * static_cast<Eigen::Index>(samples_.size()));
  for (std::size_t i = 0; i < samples_.size(); ++i)
    out.segment<3>(3 * static_cast<Eigen::Index>(i)) = velocity_at(state, samples_[i]);
  return out;
}

std::vector<double> SurrogateModel::outlet_flows(const Eigen::VectorXd& state) const {
  return std::vector<double>(state.data(), state.data() + outlet_count());
}

std::pair<Vec3, Vec3> SurrogateModel::bounding_box() const {
  double x_lo = -geometry_.trunk_radius;
  double x_hi = geometry_.trunk_radius;
  double r_max = geometry_.trunk_radius;
  for (const auto& b : geometry_.branches) {
    x_lo = std::min(x_lo, b.x_offset - b.radius);
    x_hi = std::max(x_hi, b.x_offset + b.radius);
    r_max = std::max(r_max, b.radius);
  }
  return {Vec3(x_lo, -r_max, 0.0), Vec3(x_hi, r_max, geometry_.trunk_length + geometry_.branch_length)};
}

}  // namespace kflow::forward
