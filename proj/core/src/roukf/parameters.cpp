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

#include "kflow/roukf/parameters.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "kflow/error.hpp"

namespace kflow::roukf {

Reparam reparam_from_string(std::string_view s) {
  if (s == "exponential") return Reparam::Exponential;
  if (s == "linear") return Reparam::Linear;
  throw InvalidArgument("unknown reparameterization '" + std::string(s) + "'");
}

std::string to_string(Reparam r) { return r == Reparam::Exponential ? "exponential" : "linear"; }

void ParameterSet::validate() const {
  const auto p = theta0.size();
  if (p < 1) throw InvalidArgument("ParameterSet: needs at least one parameter");
  if (!theta0.allFinite()) throw InvalidArgument("ParameterSet: theta0 must be finite");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != p)
    throw InvalidArgument("ParameterSet: one name per parameter");
  if (P0.rows() != p || P0.cols() != p) throw InvalidArgument("ParameterSet: P0 must be p x p");
  if (!P0.isApprox(P0.transpose(), 1e-12)) throw InvalidArgument("ParameterSet: P0 must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(P0);
  if (llt.info() != Eigen::Success) throw InvalidArgument("ParameterSet: P0 must be positive definite");
}

Eigen::VectorXd ParameterSet::internal_prior() const {
  return reparam == Reparam::Exponential ? Eigen::VectorXd::Zero(theta0.size())
                                         : Eigen::VectorXd::Ones(theta0.size());
}

Eigen::VectorXd reparam_to_physical(const Eigen::VectorXd& nu, const Eigen::VectorXd& theta0, Reparam r) {
  if (nu.size() != theta0.size()) throw InvalidArgument("reparam_to_physical: size mismatch");
  if (r == Reparam::Linear) return theta0.cwiseProduct(nu);
  Eigen::VectorXd theta(nu.size());
  for (Eigen::Index i = 0; i < nu.size(); ++i) theta[i] = theta0[i] * std::exp2(nu[i]);
  return theta;
}

Eigen::VectorXd physical_to_internal(const Eigen::VectorXd& theta, const Eigen::VectorXd& theta0,
                                     Reparam r) {
  if (theta.size() != theta0.size()) throw InvalidArgument("physical_to_internal: size mismatch");
  Eigen::VectorXd nu(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta0[i] == 0.0) throw InvalidArgument("physical_to_internal: theta0 entry is zero");
    const double ratio = theta[i] / theta0[i];
    if (r == Reparam::Linear) {
      nu[i] = ratio;
    } else {
      if (!(ratio > 0.0)) throw InvalidArgument("physical_to_internal: value unreachable in exponential mode");
      nu[i] = std::log2(ratio);
    }
  }
  return nu;
}

}  // namespace kflow::roukf
