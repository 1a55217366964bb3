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

#include "kflow/roukf/estimation.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "kflow/error.hpp"

namespace kflow::roukf {

FieldObserver::FieldObserver(const forward::FlowModel& model, const MeasurementSeries& series,
                             const InnovationSpec& spec, const imaging::VoxelGrid& grid)
    : model_(model), series_(series), spec_(spec), grid_(grid) {
  spec_.validate();
  series_.validate();
  if (series_.is_kspace() != (spec_.kind == InnovationKind::KSpace))
    throw InvalidArgument("FieldObserver: innovation kind does not match the measurement type");
}

Eigen::VectorXd FieldObserver::innovation(const Eigen::VectorXd& x, std::size_t n) const {
  if (n >= series_.frames.size()) throw InvalidArgument("FieldObserver: measurement index out of range");
  const auto& frame = series_.frames[n];
  std::vector<Eigen::VectorXd> parts;
  Eigen::Index total = 0;
  for (std::size_t d = 0; d < series_.directions.size(); ++d) {
    const ScalarField Hu = model_.observe_velocity(x, series_.directions[d], grid_);
    switch (spec_.kind) {
      case InnovationKind::Velocity:
        parts.push_back(innovation_velocity(frame.velocity[d], Hu));
        break;
      case InnovationKind::WrappedVelocity:
        parts.push_back(innovation_wrapped(frame.velocity[d], Hu, spec_.venc));
        break;
      case InnovationKind::KSpace:
        parts.push_back(stack_coils(spec_.coils, frame.kspace[d], Hu, spec_.venc,
                                    series_.masks[frame.mask_index[d]])
                            .residual);
        break;
    }
    total += parts.back().size();
  }
  Eigen::VectorXd out(total);
  Eigen::Index offset = 0;
  for (const auto& p : parts) {
    out.segment(offset, p.size()) = p;
    offset += p.size();
  }
  return out;
}

Eigen::VectorXd FieldObserver::inverse_weights(std::size_t n) const {
  if (n >= series_.frames.size()) throw InvalidArgument("FieldObserver: measurement index out of range");
  const auto& frame = series_.frames[n];
  std::vector<double> w;
  for (std::size_t d = 0; d < series_.directions.size(); ++d) {
    if (spec_.kind == InnovationKind::KSpace) {
      const std::size_t block = 2 * series_.masks[frame.mask_index[d]].count();
      for (const auto& c : spec_.coils) w.insert(w.end(), block, 1.0 / (c.sigma * c.sigma));
    } else {
      w.insert(w.end(), frame.velocity[d].size(), 1.0 / (spec_.sigma * spec_.sigma));
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

Eigen::VectorXd EstimationResult::final_theta(const ParameterSet& params) const {
  return reparam_to_physical(final_state.theta, params.theta0, params.reparam);
}

EstimationResult estimate_run(const ParameterSet& params, const Model& model, const Observer& observer,
                              const std::vector<double>& times, const Eigen::VectorXd& x0, double t0,
                              const EstimationOptions& options) {
  EstimationResult result;
  result.final_state = filter_init(params, x0, t0);
  FilterState& fs = result.final_state;
  for (std::size_t n = 0; n < times.size(); ++n) {
    if (n < options.skip_first) {
      const Eigen::VectorXd phys = reparam_to_physical(fs.theta, params.theta0, params.reparam);
      try {
        fs.x = model.propagate(fs.x, phys, fs.time, times[n]);
      } catch (const std::exception& e) {
        result.diverged = true;
        result.failure = e.what();
        return result;
      }
      fs.time = times[n];
      continue;
    }
    try {
      fs = filter_step(fs, params, model, observer, n, times[n], options.filter);
    } catch (const DivergenceError& e) {
      result.diverged = true;
      result.failure = e.what();
      result.failed_particle = e.particle();
      return result;
    }
    TrajectoryRow row;
    row.step = n + 1;
    row.time = times[n];
    row.theta = reparam_to_physical(fs.theta, params.theta0, params.reparam);
    row.variance = parameter_covariance(fs).diagonal();
    result.trajectory.push_back(std::move(row));
  }
  return result;
}

void write_trajectory_csv(std::ostream& out, const ParameterSet& params,
                          const std::vector<TrajectoryRow>& rows) {
  std::vector<std::string> names = params.names;
  for (int i = static_cast<int>(names.size()); i < params.size(); ++i) names.push_back("theta" + std::to_string(i));
  out << "step,time";
  for (const auto& n : names) out << ',' << n;
  for (const auto& n : names) out << ",var_" << n;
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows) {
    out << r.step << ',' << r.time;
    for (Eigen::Index i = 0; i < r.theta.size(); ++i) out << ',' << r.theta[i];
    for (Eigen::Index i = 0; i < r.variance.size(); ++i) out << ',' << r.variance[i];
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const ParameterSet& params,
                          const std::vector<TrajectoryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_trajectory_csv(out, params, rows);
}

}  // namespace kflow::roukf
