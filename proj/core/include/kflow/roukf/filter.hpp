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

#ifndef KFLOW_ROUKF_FILTER_HPP_
#define KFLOW_ROUKF_FILTER_HPP_

#include <cstddef>

#include <Eigen/Core>

#include "kflow/roukf/parameters.hpp"
#include "kflow/roukf/sigma_points.hpp"

namespace kflow::roukf {

// Dynamics seen by the filter. `theta` is in physical units; implementations
// must be safe to call concurrently on distinct states.
class Model {
 public:
  virtual ~Model() = default;
  virtual Eigen::VectorXd propagate(const Eigen::VectorXd& x, const Eigen::VectorXd& theta, double t0,
                                    double t1) const = 0;
};

// Innovation y_n - H(x) for measurement n and the diagonal of W^-1.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual Eigen::VectorXd innovation(const Eigen::VectorXd& x, std::size_t n) const = 0;
  virtual Eigen::VectorXd inverse_weights(std::size_t n) const = 0;
};

struct FilterState {
  Eigen::VectorXd x;        // a posteriori state
  Eigen::VectorXd theta;    // a posteriori parameters, internal coordinates
  Eigen::MatrixXd L_X;      // r x p
  Eigen::MatrixXd L_theta;  // p x p
  Eigen::MatrixXd U;        // p x p, SPD
  std::size_t step = 0;
  double time = 0.0;
};

struct FilterOptions {
  int threads = 1;  // 0 picks the hardware concurrency
};

FilterState filter_init(const ParameterSet& params, const Eigen::VectorXd& x0, double t0 = 0.0);

// Sampling, prediction up to t_meas and correction with measurement n.
// Throws DivergenceError naming the particle when a forward run fails and
// with particle -1 when U stops being positive definite.
FilterState filter_step(const FilterState& fs, const ParameterSet& params, const Model& model,
                        const Observer& observer, std::size_t n, double t_meas,
                        const FilterOptions& options = {});

// Lower-triangular C with C C^T = U^-1, obtained from a Cholesky factor of U
// by triangular solves.
Eigen::MatrixXd inverse_cholesky(const Eigen::MatrixXd& U);

// P_theta = L_theta U^-1 L_theta^T (internal coordinates).
Eigen::MatrixXd parameter_covariance(const FilterState& fs);

}  // namespace kflow::roukf

#endif  // KFLOW_ROUKF_FILTER_HPP_
