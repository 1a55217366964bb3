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

#ifndef KFLOW_PIPELINE_MODEL_BINDING_HPP_
#define KFLOW_PIPELINE_MODEL_BINDING_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "kflow/forward/flow_model.hpp"
#include "kflow/roukf/filter.hpp"

namespace kflow::pipeline {

// Which model quantity an estimated parameter overrides. Names are "U" for the
// inflow amplitude and "Rp_k", "Rd_k", "C_k" for outlet k (counted from 1).
struct ParameterTarget {
  enum class Field { U, Rp, Rd, C } field = Field::U;
  int outlet = -1;  // zero-based, -1 for U
};

ParameterTarget parse_parameter_name(const std::string& name, int outlet_count);

// Copy of `base` with the named entries replaced by theta (physical units).
// Rd and C can only be bound on Windkessel outlets.
forward::ModelParameters apply_parameters(const forward::ModelParameters& base,
                                          const std::vector<ParameterTarget>& targets,
                                          const Eigen::VectorXd& theta);

// The values of the named entries in `params`.
Eigen::VectorXd extract_parameters(const forward::ModelParameters& params,
                                   const std::vector<ParameterTarget>& targets);

// Filter dynamics backed by a FlowModel. The interval between two calls must
// be a whole number of model time steps.
class BoundModel final : public roukf::Model {
 public:
  BoundModel(const forward::FlowModel& model, forward::ModelParameters base,
             const std::vector<std::string>& names);

  Eigen::VectorXd propagate(const Eigen::VectorXd& x, const Eigen::VectorXd& theta, double t0,
                            double t1) const override;

  const std::vector<ParameterTarget>& targets() const noexcept { return targets_; }
  forward::ModelParameters parameters(const Eigen::VectorXd& theta) const;

 private:
  const forward::FlowModel& model_;
  forward::ModelParameters base_;
  std::vector<ParameterTarget> targets_;
};

// Number of model steps between t0 and t1; throws InvalidArgument unless it is
// a non-negative integer.
int whole_steps(double t0, double t1, double tau);

}  // namespace kflow::pipeline

#endif  // KFLOW_PIPELINE_MODEL_BINDING_HPP_
