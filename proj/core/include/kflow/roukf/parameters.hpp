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

#ifndef KFLOW_ROUKF_PARAMETERS_HPP_
#define KFLOW_ROUKF_PARAMETERS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace kflow::roukf {

// Mapping between the filter's internal coordinates nu and physical values.
//   Exponential: theta = theta0 * 2^nu  (prior nu = 0, theta stays positive)
//   Linear:      theta = theta0 * nu    (prior nu = 1, sign is not enforced)
enum class Reparam { Exponential, Linear };

Reparam reparam_from_string(std::string_view s);
std::string to_string(Reparam r);

struct ParameterSet {
  std::vector<std::string> names;
  Eigen::VectorXd theta0;  // prior mean, physical units
  Eigen::MatrixXd P0;      // prior covariance of the internal coordinates
  Reparam reparam = Reparam::Exponential;

  int size() const noexcept { return static_cast<int>(theta0.size()); }
  // Throws InvalidArgument unless p >= 1, sizes agree and P0 is SPD.
  void validate() const;
  Eigen::VectorXd internal_prior() const;
};

Eigen::VectorXd reparam_to_physical(const Eigen::VectorXd& nu, const Eigen::VectorXd& theta0, Reparam r);
// Inverse map; throws for values the mapping cannot reach (theta / theta0 <= 0
// in exponential mode).
Eigen::VectorXd physical_to_internal(const Eigen::VectorXd& theta, const Eigen::VectorXd& theta0,
                                     Reparam r);

}  // namespace kflow::roukf

#endif  // KFLOW_ROUKF_PARAMETERS_HPP_
