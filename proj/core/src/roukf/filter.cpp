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

#include "kflow/roukf/filter.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>

#include "kflow/error.hpp"

namespace kflow::roukf {
namespace {

// Runs f(i) for i in [0, count) on up to `threads` workers. The first
// exception (lowest index) is rethrown after all workers finish.
template <typename F>
void parallel_for(int count, int threads, F&& f) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto run = [&](int i) {
    try {
      f(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) run(i);
      });
    for (auto& t : pool) t.join();
  }
  for (int i = 0; i < count; ++i) {
    if (!errors[static_cast<std::size_t>(i)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    } catch (const std::exception& e) {
      throw DivergenceError("forward model failed for particle " + std::to_string(i) + ": " + e.what(), i);
    }
  }
}

}  // namespace

FilterState filter_init(const ParameterSet& params, const Eigen::VectorXd& x0, double t0) {
  params.validate();
  const int p = params.size();
  FilterState fs;
  fs.x = x0;
  fs.theta = params.internal_prior();
  Eigen::LLT<Eigen::MatrixXd> llt(params.P0);
  fs.L_theta = llt.matrixL();
  fs.L_X = Eigen::MatrixXd::Zero(x0.size(), p);
  const auto sp = canonical_sigma_points(p);
  fs.U = sp.alpha * sp.points * sp.points.transpose();
  fs.time = t0;
  return fs;
}

Eigen::MatrixXd inverse_cholesky(const Eigen::MatrixXd& U) {
  // With J the exchange matrix, chol(J U J) = R gives U = (J R J)(J R J)^T
  // where J R J is upper triangular, hence U^-1 = (J R J)^-T (J R J)^-1 and
  // (J R J)^-T is the lower-triangular factor we want.
  const Eigen::Index p = U.rows();
  const Eigen::MatrixXd flipped = U.reverse();
  Eigen::LLT<Eigen::MatrixXd> llt(flipped);
  if (llt.info() != Eigen::Success) throw DivergenceError("U is no longer positive definite");
  const Eigen::MatrixXd upper = Eigen::MatrixXd(llt.matrixL()).reverse();
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(p, p);
  upper.transpose().triangularView<Eigen::Lower>().solveInPlace(C);
  return C;
}

Eigen::MatrixXd parameter_covariance(const FilterState& fs) {
  Eigen::LLT<Eigen::MatrixXd> llt(fs.U);
  if (llt.info() != Eigen::Success) throw DivergenceError("U is no longer positive definite");
  return fs.L_theta * llt.solve(fs.L_theta.transpose());
}

FilterState filter_step(const FilterState& fs, const ParameterSet& params, const Model& model,
                        const Observer& observer, std::size_t n, double t_meas,
                        const FilterOptions& options) {
  const int p = params.size();
  const auto sp = canonical_sigma_points(p);
  const int count = sp.count();
  if (!(t_meas > fs.time)) throw InvalidArgument("filter_step: measurement time must be after the state time");

  // Sampling.
  const Eigen::MatrixXd C = inverse_cholesky(fs.U);
  const Eigen::MatrixXd dx = fs.L_X * C;
  const Eigen::MatrixXd dtheta = fs.L_theta * C;
  std::vector<Eigen::VectorXd> states(static_cast<std::size_t>(count));
  std::vector<Eigen::VectorXd> thetas(static_cast<std::size_t>(count));
  std::vector<Eigen::VectorXd> innovations(static_cast<std::size_t>(count));

  // Prediction and innovation per particle.
  parallel_for(count, options.threads, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    thetas[k] = fs.theta + dtheta * sp.points.col(i);
    const Eigen::VectorXd x = fs.x + dx * sp.points.col(i);
    const Eigen::VectorXd phys = reparam_to_physical(thetas[k], params.theta0, params.reparam);
    states[k] = model.propagate(x, phys, fs.time, t_meas);
    if (!states[k].allFinite()) throw SolverError("non-finite state");
    innovations[k] = observer.innovation(states[k], n);
    if (!innovations[k].allFinite()) throw SolverError("non-finite innovation");
  });

  const Eigen::Index r = fs.x.size();
  const Eigen::Index m = innovations.front().size();
  Eigen::VectorXd x_mean = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd theta_mean = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd gamma_mean = Eigen::VectorXd::Zero(m);
  FilterState out;
  out.L_X = Eigen::MatrixXd::Zero(r, p);
  out.L_theta = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd L_gamma = Eigen::MatrixXd::Zero(m, p);
  for (int i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (innovations[k].size() != m) throw InvalidArgument("filter_step: innovation sizes differ");
    x_mean += sp.alpha * states[k];
    theta_mean += sp.alpha * thetas[k];
    gamma_mean += sp.alpha * innovations[k];
    out.L_X += sp.alpha * states[k] * sp.points.col(i).transpose();
    out.L_theta += sp.alpha * thetas[k] * sp.points.col(i).transpose();
    L_gamma += sp.alpha * innovations[k] * sp.points.col(i).transpose();
  }

  // Correction.
  const Eigen::VectorXd w_inv = observer.inverse_weights(n);
  if (w_inv.size() != m) throw InvalidArgument("filter_step: weight size does not match the innovation");
  const Eigen::MatrixXd WL = w_inv.asDiagonal() * L_gamma;
  out.U = sp.alpha * sp.points * sp.points.transpose() + L_gamma.transpose() * WL;
  out.U = 0.5 * (out.U + out.U.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(out.U);
  if (llt.info() != Eigen::Success) throw DivergenceError("U is no longer positive definite");
  const Eigen::VectorXd gain = llt.solve(WL.transpose() * gamma_mean);
  out.x = x_mean - out.L_X * gain;
  out.theta = theta_mean - out.L_theta * gain;
  if (!out.x.allFinite() || !out.theta.allFinite()) throw DivergenceError("non-finite correction");
  out.step = fs.step + 1;
  out.time = t_meas;
  return out;
}

}  // namespace kflow::roukf
