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

#include "kflow/forward/navier_stokes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/IterativeLinearSolvers>

#include "kflow/error.hpp"
#include "kflow/forward/stokes_profile.hpp"
#include "kflow/forward/voxelizer.hpp"

namespace kflow::forward {
namespace {

using StrideMap = Eigen::Map<Eigen::VectorXd, 0, Eigen::InnerStride<3>>;
using ConstStrideMap = Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<3>>;

ConstStrideMap component(const Eigen::VectorXd& u, int c) {
  return ConstStrideMap(u.data() + c, u.size() / 3);
}
StrideMap component(Eigen::VectorXd& u, int c) { return StrideMap(u.data() + c, u.size() / 3); }

int rank_of(const std::vector<int>& sorted, int v) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  return static_cast<int>(it - sorted.begin());
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw SolverError(std::string(what) + ": non-finite solution");
}

}  // namespace

void FluidProps::validate() const {
  if (!(rho > 0.0) || !(mu > 0.0)) throw InvalidArgument("FluidProps: rho and mu must be > 0");
}

void SolverConfig::validate() const {
  if (!(tau > 0.0)) throw InvalidArgument("SolverConfig: tau must be > 0");
  if (!(delta >= 0.0) || !(epsilon >= 0.0))
    throw InvalidArgument("SolverConfig: delta and epsilon must be >= 0");
  if (!(tolerance > 0.0) || max_iterations < 1)
    throw InvalidArgument("SolverConfig: bad linear solver settings");
}

void ModelParameters::validate(int expected_outlets) const {
  inflow.validate();
  if (static_cast<int>(outlets.size()) != expected_outlets)
    throw InvalidArgument("ModelParameters: expected " + std::to_string(expected_outlets) +
                          " outlets, got " + std::to_string(outlets.size()));
  for (const auto& w : outlets) w.validate();
}

NavierStokesModel::NavierStokesModel(Mesh mesh, FluidProps props, SolverConfig config)
    : space_(std::move(mesh)), props_(props), config_(config) {
  props_.validate();
  config_.validate();
  build_velocity_pattern();

  mass_solver_.compute(space_.mass());
  if (mass_solver_.info() != Eigen::Success) throw SolverError("NavierStokesModel: singular mass matrix");

  const std::size_t n = space_.node_count();
  plug_shape_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(3 * n));
  for (std::size_t i = 0; i < n; ++i)
    if ((space_.node_flags()[i] & kNodeInlet) && !space_.is_wall(i))
      plug_shape_.segment<3>(static_cast<Eigen::Index>(3 * i)) = -space_.inlet_normals()[i];
}

NavierStokesModel::~NavierStokesModel() = default;

void NavierStokesModel::build_velocity_pattern() {
  const auto& mesh = space_.mesh();
  const std::size_t n = space_.node_count();
  adjacency_.assign(n, {});
  for (const auto& t : mesh.tets)
    for (int a : t)
      for (int b : t) adjacency_[static_cast<std::size_t>(a)].push_back(b);
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  diagonal_rank_.resize(n);
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t a = 0; a < n; ++a) {
    diagonal_rank_[a] = rank_of(adjacency_[a], static_cast<int>(a));
    for (int b : adjacency_[a])
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          entries.emplace_back(static_cast<int>(3 * a) + i, 3 * b + j, 0.0);
  }
  const auto N = static_cast<Eigen::Index>(3 * n);
  pattern_.resize(N, N);
  pattern_.setFromTriplets(entries.begin(), entries.end());
  pattern_.makeCompressed();

  tet_blocks_.resize(mesh.tets.size());
  for (std::size_t e = 0; e < mesh.tets.size(); ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        tet_blocks_[e][4 * a + b] =
            rank_of(adjacency_[static_cast<std::size_t>(mesh.tets[e][a])], mesh.tets[e][b]);

  // Constant part: (rho/tau) mass + 2 mu (eps(u), eps(v)).
  constant_values_ = Eigen::VectorXd::Zero(pattern_.nonZeros());
  const int* outer = pattern_.outerIndexPtr();
  const double m_scale = props_.rho / config_.tau;
  std::vector<Eigen::Triplet<double>> grad_entries;
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const auto& t = mesh.tets[e];
    const auto& g = space_.tets()[e];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const double m = g.volume * (a == b ? 0.1 : 0.05);
        const double gg = g.grad[a].dot(g.grad[b]);
        const int rank = tet_blocks_[e][4 * a + b];
        for (int i = 0; i < 3; ++i) {
          const int row = 3 * t[a] + i;
          for (int j = 0; j < 3; ++j) {
            double v = props_.mu * g.volume * g.grad[a][j] * g.grad[b][i];
            if (i == j) v += m_scale * m + props_.mu * g.volume * gg;
            constant_values_[outer[row] + 3 * rank + j] += v;
          }
          grad_entries.emplace_back(row, t[b], 0.25 * g.volume * g.grad[b][i]);
        }
      }
  }
  gradient_.resize(N, static_cast<Eigen::Index>(n));
  gradient_.setFromTriplets(grad_entries.begin(), grad_entries.end());

  // Tangential stiffness of the outlet surfaces: A (e_a . e_b) / (4 A^2).
  std::vector<Eigen::Triplet<double>> surf;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.faces[f].tag < kFirstOutletTag) continue;
    const auto& v = mesh.faces[f].nodes;
    const Vec3& p0 = mesh.nodes[v[0]];
    const Vec3& p1 = mesh.nodes[v[1]];
    const Vec3& p2 = mesh.nodes[v[2]];
    const std::array<Vec3, 3> edge{p2 - p1, p0 - p2, p1 - p0};
    const double area = space_.faces()[f].area;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) surf.emplace_back(v[a], v[b], edge[a].dot(edge[b]) / (4.0 * area));
  }
  outlet_surface_stiffness_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  outlet_surface_stiffness_.setFromTriplets(surf.begin(), surf.end());
}

FlowState NavierStokesModel::zero_state() const {
  const auto n = static_cast<Eigen::Index>(space_.node_count());
  FlowState s;
  s.u = Eigen::VectorXd::Zero(3 * n);
  s.p = Eigen::VectorXd::Zero(n);
  s.pi = Eigen::VectorXd::Zero(space_.outlet_count());
  return s;
}

Eigen::VectorXd NavierStokesModel::pack(const FlowState& s) const {
  const auto n = static_cast<Eigen::Index>(space_.node_count());
  const Eigen::Index K = space_.outlet_count();
  if (s.u.size() != 3 * n || s.p.size() != n || s.pi.size() != K)
    throw InvalidArgument("NavierStokesModel: state does not match the mesh");
  Eigen::VectorXd x(4 * n + K);
  x << s.u, s.p, s.pi;
  return x;
}

FlowState NavierStokesModel::unpack(const Eigen::VectorXd& x, double t) const {
  const auto n = static_cast<Eigen::Index>(space_.node_count());
  const Eigen::Index K = space_.outlet_count();
  if (x.size() != 4 * n + K) throw InvalidArgument("NavierStokesModel: state vector has wrong size");
  FlowState s;
  s.u = x.head(3 * n);
  s.p = x.segment(3 * n, n);
  s.pi = x.tail(K);
  s.t = t;
  return s;
}

const Eigen::VectorXd& NavierStokesModel::inlet_shape(InflowSpatial spatial) const {
  if (spatial == InflowSpatial::PlugNormal) return plug_shape_;
  std::call_once(stokes_once_, [this] { stokes_shape_ = solve_stokes_profile(space_); });
  return stokes_shape_;
}

Eigen::VectorXd NavierStokesModel::inlet_velocity(const InflowProfile& inflow, double t) const {
  return (inflow.U * inflow_value(inflow, t)) * inlet_shape(inflow.spatial);
}

Eigen::VectorXd NavierStokesModel::viscous_step(const Eigen::VectorXd& u_prev,
                                                const Eigen::VectorXd& dirichlet) const {
  const auto& mesh = space_.mesh();
  const std::size_t n = space_.node_count();
  if (u_prev.size() != static_cast<Eigen::Index>(3 * n) || dirichlet.size() != u_prev.size())
    throw InvalidArgument("viscous_step: velocity size does not match the mesh");

  Eigen::SparseMatrix<double, Eigen::RowMajor> A = pattern_;
  Eigen::Map<Eigen::VectorXd> values(A.valuePtr(), A.nonZeros());
  values = constant_values_;
  const int* outer = A.outerIndexPtr();
  const double rho = props_.rho;
  const double nu = props_.mu / props_.rho;

  auto add_scalar_block = [&](int a, int rank, double v) {
    for (int i = 0; i < 3; ++i) values[outer[3 * a + i] + 3 * rank + i] += v;
  };

  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const auto& t = mesh.tets[e];
    const auto& g = space_.tets()[e];
    std::array<Vec3, 4> uk;
    Vec3 mean = Vec3::Zero();
    double div = 0.0;
    for (int k = 0; k < 4; ++k) {
      uk[k] = u_prev.segment<3>(3 * t[k]);
      mean += 0.25 * uk[k];
      div += uk[k].dot(g.grad[k]);
    }
    // Exact integral of u u^T for linear u.
    Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) S += (g.volume * (k == l ? 0.1 : 0.05)) * uk[k] * uk[l].transpose();
    const double supg = config_.delta * rho * g.h * g.h / (4.0 * nu + g.h * mean.norm());
    for (int a = 0; a < 4; ++a) {
      const Vec3 Sga = S * g.grad[a];
      for (int b = 0; b < 4; ++b) {
        double conv = 0.0;
        for (int k = 0; k < 4; ++k) conv += (k == a ? 0.1 : 0.05) * uk[k].dot(g.grad[b]);
        conv *= rho * g.volume;
        const double skew = 0.5 * rho * div * g.volume * (a == b ? 0.1 : 0.05);
        add_scalar_block(t[a], tet_blocks_[e][4 * a + b], conv + skew + supg * Sga.dot(g.grad[b]));
      }
    }
  }

  // Backflow stabilization on outlets.
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.faces[f].tag < kFirstOutletTag) continue;
    const auto& v = mesh.faces[f].nodes;
    const auto& fg = space_.faces()[f];
    const double un = fg.normal.dot(u_prev.segment<3>(3 * v[0]) + u_prev.segment<3>(3 * v[1]) +
                                    u_prev.segment<3>(3 * v[2])) / 3.0;
    if (un >= 0.0) continue;
    const double coef = -0.5 * rho * un * fg.area;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        add_scalar_block(v[a], rank_of(adjacency_[static_cast<std::size_t>(v[a])], v[b]),
                         coef * (a == b ? 1.0 / 6.0 : 1.0 / 12.0));
  }

  Eigen::VectorXd rhs(3 * n);
  const double m_scale = rho / config_.tau;
  for (int c = 0; c < 3; ++c) component(rhs, c) = m_scale * (space_.mass() * component(u_prev, c));

  Eigen::VectorXd guess = u_prev;
  for (std::size_t a = 0; a < n; ++a) {
    if (!space_.is_dirichlet(a)) continue;
    for (int i = 0; i < 3; ++i) {
      const int row = static_cast<int>(3 * a) + i;
      for (int k = outer[row]; k < outer[row + 1]; ++k) values[k] = 0.0;
      values[outer[row] + 3 * diagonal_rank_[a] + i] = 1.0;
      const double d = space_.is_wall(a) ? 0.0 : dirichlet[row];
      rhs[row] = d;
      guess[row] = d;
    }
  }

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::DiagonalPreconditioner<double>>
      solver;
  solver.setTolerance(config_.tolerance);
  solver.setMaxIterations(config_.max_iterations);
  solver.compute(A);
  Eigen::VectorXd u = solver.solveWithGuess(rhs, guess);
  if (solver.info() != Eigen::Success)
    throw SolverError("viscous_step: BiCGSTAB did not converge (residual " +
                      std::to_string(solver.error()) + ")");
  require_finite(u, "viscous_step");
  return u;
}

std::shared_ptr<const PressureSystem> NavierStokesModel::pressure_system(
    const std::vector<WindkesselParams>& outlets) const {
  const int K = space_.outlet_count();
  if (static_cast<int>(outlets.size()) != K)
    throw InvalidArgument("pressure_system: expected " + std::to_string(K) + " outlets");
  auto sys = std::make_shared<PressureSystem>();
  sys->outlets = outlets;
  Eigen::SparseMatrix<double> A = (config_.tau / props_.rho) * space_.stiffness();
  A += config_.epsilon * outlet_surface_stiffness_;
  std::vector<Eigen::Triplet<double>> coupling;
  for (int k = 0; k < K; ++k) {
    const auto c = windkessel_coefficients(outlets[static_cast<std::size_t>(k)], config_.tau);
    sys->coefficients.push_back(c);
    const Eigen::VectorXd& b = space_.boundary_weights(kFirstOutletTag + k);
    const double area = space_.boundary_area(kFirstOutletTag + k);
    const double scale = 1.0 / (c.gamma * area * area);
    std::vector<int> support;
    for (Eigen::Index i = 0; i < b.size(); ++i)
      if (b[i] != 0.0) support.push_back(static_cast<int>(i));
    for (int i : support)
      for (int j : support) coupling.emplace_back(i, j, scale * b[i] * b[j]);
  }
  Eigen::SparseMatrix<double> C(A.rows(), A.cols());
  C.setFromTriplets(coupling.begin(), coupling.end());
  A += C;
  sys->solver.compute(A);
  if (sys->solver.info() != Eigen::Success) throw SolverError("pressure_system: factorization failed");
  return sys;
}

Eigen::VectorXd NavierStokesModel::projection_windkessel_step(const Eigen::VectorXd& u_tilde,
                                                              const Eigen::VectorXd& pi_prev,
                                                              const PressureSystem& sys) const {
  const auto& mesh = space_.mesh();
  const int K = space_.outlet_count();
  if (pi_prev.size() != K) throw InvalidArgument("projection_windkessel_step: wrong pi size");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_.node_count()));
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const auto& t = mesh.tets[e];
    const auto& g = space_.tets()[e];
    double div = 0.0;
    for (int k = 0; k < 4; ++k) div += g.grad[k].dot(u_tilde.segment<3>(3 * t[k]));
    for (int a : t) rhs[a] -= 0.25 * g.volume * div;
  }
  for (int k = 0; k < K; ++k) {
    const auto& c = sys.coefficients[static_cast<std::size_t>(k)];
    const int tag = kFirstOutletTag + k;
    const double q_tilde = space_.flux(u_tilde, tag);
    rhs += ((q_tilde + c.alpha * pi_prev[k] / c.gamma) / space_.boundary_area(tag)) *
           space_.boundary_weights(tag);
  }
  Eigen::VectorXd p = sys.solver.solve(rhs);
  require_finite(p, "projection_windkessel_step");
  return p;
}

Eigen::VectorXd NavierStokesModel::velocity_correction(const Eigen::VectorXd& u_tilde,
                                                       const Eigen::VectorXd& p,
                                                       const Eigen::VectorXd& dirichlet) const {
  const std::size_t n = space_.node_count();
  if (p.size() != static_cast<Eigen::Index>(n) || u_tilde.size() != static_cast<Eigen::Index>(3 * n))
    throw InvalidArgument("velocity_correction: fields do not match the mesh");
  const Eigen::VectorXd gp = gradient_ * p;
  Eigen::VectorXd u = u_tilde;
  const double scale = config_.tau / props_.rho;
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd rhs = component(gp, c);
    component(u, c) -= scale * mass_solver_.solve(rhs);
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!space_.is_dirichlet(a)) continue;
    const auto idx = static_cast<Eigen::Index>(3 * a);
    if (space_.is_wall(a))
      u.segment<3>(idx).setZero();
    else
      u.segment<3>(idx) = dirichlet.segment<3>(idx);
  }
  require_finite(u, "velocity_correction");
  return u;
}

double NavierStokesModel::outlet_pressure(const Eigen::VectorXd& p, int k) const {
  const int tag = kFirstOutletTag + k;
  return space_.boundary_weights(tag).dot(p) / space_.boundary_area(tag);
}

std::vector<double> NavierStokesModel::coupled_outlet_flows(const Eigen::VectorXd& p,
                                                            const Eigen::VectorXd& pi_prev,
                                                            const PressureSystem& sys) const {
  std::vector<double> q;
  for (int k = 0; k < space_.outlet_count(); ++k)
    q.push_back(windkessel_flux(pi_prev[k], outlet_pressure(p, k),
                                sys.coefficients[static_cast<std::size_t>(k)]));
  return q;
}

FlowState NavierStokesModel::step(const FlowState& s, const ModelParameters& params) const {
  params.validate(space_.outlet_count());
  return step(s, params, *pressure_system(params.outlets));
}

FlowState NavierStokesModel::step(const FlowState& s, const ModelParameters& params,
                                  const PressureSystem& sys) const {
  FlowState next;
  next.t = s.t + config_.tau;
  const Eigen::VectorXd dirichlet = inlet_velocity(params.inflow, next.t);
  const Eigen::VectorXd u_tilde = viscous_step(s.u, dirichlet);
  next.p = projection_windkessel_step(u_tilde, s.pi, sys);
  next.u = velocity_correction(u_tilde, next.p, dirichlet);
  next.pi.resize(s.pi.size());
  for (int k = 0; k < space_.outlet_count(); ++k)
    next.pi[k] = windkessel_update(s.pi[k], outlet_pressure(next.p, k),
                                   sys.outlets[static_cast<std::size_t>(k)], config_.tau);
  return next;
}

double NavierStokesModel::kinetic_energy(const Eigen::VectorXd& u) const {
  double e = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd uc = component(u, c);
    e += uc.dot(space_.mass() * uc);
  }
  return 0.5 * props_.rho * e;
}

Eigen::VectorXd NavierStokesModel::initial_state() const { return pack(zero_state()); }

void NavierStokesModel::advance(Eigen::VectorXd& state, const ModelParameters& params, double t0,
                                int steps) const {
  if (steps < 0) throw InvalidArgument("advance: negative step count");
  params.validate(space_.outlet_count());
  FlowState s = unpack(state, t0);
  if (steps == 0) return;
  const auto sys = pressure_system(params.outlets);
  for (int j = 0; j < steps; ++j) {
    s = step(s, params, *sys);
    // Keep time exact instead of accumulating rounding from repeated adds.
    s.t = t0 + (j + 1) * config_.tau;
  }
  state = pack(s);
}

std::shared_ptr<const Voxelizer> NavierStokesModel::voxelizer(const VoxelGrid& grid) const {
  {
    std::lock_guard lock(cache_mutex_);
    for (const auto& [g, v] : voxelizers_)
      if (g == grid) return v;
  }
  auto v = std::make_shared<const Voxelizer>(space_.mesh(), grid);
  std::lock_guard lock(cache_mutex_);
  for (const auto& [g, cached] : voxelizers_)
    if (g == grid) return cached;
  voxelizers_.emplace_back(grid, v);
  return v;
}

ScalarField NavierStokesModel::observe_velocity(const Eigen::VectorXd& state, const Vec3& direction,
                                                const VoxelGrid& grid) const {
  const auto n = static_cast<Eigen::Index>(space_.node_count());
  if (state.size() < 3 * n) throw InvalidArgument("observe_velocity: state too short");
  return voxelizer(grid)->apply(state.head(3 * n), direction);
}

std::vector<std::uint8_t> NavierStokesModel::lumen_mask(const VoxelGrid& grid) const {
  return voxelizer(grid)->inside();
}

Eigen::VectorXd NavierStokesModel::velocity_samples(const Eigen::VectorXd& state) const {
  const auto n = static_cast<Eigen::Index>(space_.node_count());
  if (state.size() < 3 * n) throw InvalidArgument("velocity_samples: state too short");
  return state.head(3 * n);
}

std::vector<double> NavierStokesModel::outlet_flows(const Eigen::VectorXd& state) const {
  const auto n = static_cast<Eigen::Index>(space_.node_count());
  const Eigen::VectorXd u = state.head(3 * n);
  std::vector<double> q;
  for (int k = 0; k < space_.outlet_count(); ++k) q.push_back(space_.flux(u, kFirstOutletTag + k));
  return q;
}

}  // namespace kflow::forward
