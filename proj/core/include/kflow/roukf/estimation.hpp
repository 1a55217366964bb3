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

#ifndef KFLOW_ROUKF_ESTIMATION_HPP_
#define KFLOW_ROUKF_ESTIMATION_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kflow/forward/flow_model.hpp"
#include "kflow/roukf/filter.hpp"
#include "kflow/roukf/innovation.hpp"

namespace kflow::roukf {

// Compares a FlowModel state with one frame of a MeasurementSeries.
class FieldObserver final : public Observer {
 public:
  // `grid` is the image grid velocities are sampled on; the references must
  // outlive the observer.
  FieldObserver(const forward::FlowModel& model, const MeasurementSeries& series,
                const InnovationSpec& spec, const imaging::VoxelGrid& grid);

  Eigen::VectorXd innovation(const Eigen::VectorXd& x, std::size_t n) const override;
  Eigen::VectorXd inverse_weights(std::size_t n) const override;

 private:
  const forward::FlowModel& model_;
  const MeasurementSeries& series_;
  const InnovationSpec& spec_;
  imaging::VoxelGrid grid_;
};

struct EstimationOptions {
  std::size_t skip_first = 0;  // measurements advanced through without correction
  FilterOptions filter;
};

struct TrajectoryRow {
  std::size_t step = 0;
  double time = 0.0;
  Eigen::VectorXd theta;     // physical
  Eigen::VectorXd variance;  // diagonal of P_theta, internal coordinates
};

struct EstimationResult {
  std::vector<TrajectoryRow> trajectory;
  FilterState final_state;
  bool diverged = false;
  std::string failure;
  std::ptrdiff_t failed_particle = -1;

  Eigen::VectorXd final_theta(const ParameterSet& params) const;
};

// Runs the filter over the measurement instants. Skipped measurements advance
// the mean state with the prior parameters. A divergence stops the run and
// keeps the trajectory recorded so far.
EstimationResult estimate_run(const ParameterSet& params, const Model& model, const Observer& observer,
                              const std::vector<double>& times, const Eigen::VectorXd& x0, double t0,
                              const EstimationOptions& options = {});

// CSV: step,time,<name>...,var_<name>...
void write_trajectory_csv(std::ostream& out, const ParameterSet& params,
                          const std::vector<TrajectoryRow>& rows);
void write_trajectory_csv(const std::string& path, const ParameterSet& params,
                          const std::vector<TrajectoryRow>& rows);

}  // namespace kflow::roukf

#endif  // KFLOW_ROUKF_ESTIMATION_HPP_
