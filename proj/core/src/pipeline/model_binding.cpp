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

#include "kflow/pipeline/model_binding.hpp"

#include <charconv>
#include <cmath>

#include "kflow/error.hpp"

namespace kflow::pipeline {

ParameterTarget parse_parameter_name(const std::string& name, int outlet_count) {
  if (name == "U") return {};
  const auto sep = name.find('_');
  if (sep == std::string::npos) throw InvalidArgument("unknown parameter '" + name + "'");
  const std::string field = name.substr(0, sep);
  ParameterTarget t;
  if (field == "Rp") t.field = ParameterTarget::Field::Rp;
  else if (field == "Rd") t.field = ParameterTarget::Field::Rd;
  else if (field == "C") t.field = ParameterTarget::Field::C;
  else throw InvalidArgument("unknown parameter '" + name + "'");
  int k = 0;
  const char* first = name.data() + sep + 1;
  const char* last = name.data() + name.size();
  const auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec != std::errc() || ptr != last || first == last)
    throw InvalidArgument("bad outlet index in parameter '" + name + "'");
  if (k < 1 || k > outlet_count)
    throw InvalidArgument("parameter '" + name + "' refers to a missing outlet");
  t.outlet = k - 1;
  return t;
}

forward::ModelParameters apply_parameters(const forward::ModelParameters& base,
                                          const std::vector<ParameterTarget>& targets,
                                          const Eigen::VectorXd& theta) {
  if (theta.size() != static_cast<Eigen::Index>(targets.size()))
    throw InvalidArgument("apply_parameters: one value per target expected");
  forward::ModelParameters p = base;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double v = theta[static_cast<Eigen::Index>(i)];
    const auto& t = targets[i];
    if (t.field == ParameterTarget::Field::U) {
      p.inflow.U = v;
      continue;
    }
    auto& o = p.outlets.at(static_cast<std::size_t>(t.outlet));
    switch (t.field) {
      case ParameterTarget::Field::Rp: o.Rp = v; break;
      case ParameterTarget::Field::Rd:
        if (o.is_resistance()) throw InvalidArgument("Rd bound on a resistance outlet");
        o.Rd = v;
        break;
      case ParameterTarget::Field::C:
        if (o.is_resistance()) throw InvalidArgument("C bound on a resistance outlet");
        o.C = v;
        break;
      case ParameterTarget::Field::U: break;
    }
  }
  return p;
}

Eigen::VectorXd extract_parameters(const forward::ModelParameters& params,
                                   const std::vector<ParameterTarget>& targets) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(targets.size()));
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& t = targets[i];
    double x = params.inflow.U;
    if (t.field != ParameterTarget::Field::U) {
      const auto& o = params.outlets.at(static_cast<std::size_t>(t.outlet));
      if (t.field == ParameterTarget::Field::Rp) x = o.Rp;
      else if (t.field == ParameterTarget::Field::Rd) x = o.Rd.value_or(0.0);
      else x = o.C.value_or(0.0);
    }
    v[static_cast<Eigen::Index>(i)] = x;
  }
  return v;
}

int whole_steps(double t0, double t1, double tau) {
  const double r = (t1 - t0) / tau;
  const double n = std::round(r);
  if (n < 0.0 || std::abs(r - n) > 1e-6) throw InvalidArgument("interval is not a whole number of time steps");
  return static_cast<int>(n);
}

BoundModel::BoundModel(const forward::FlowModel& model, forward::ModelParameters base,
                       const std::vector<std::string>& names)
    : model_(model), base_(std::move(base)) {
  for (const auto& n : names) targets_.push_back(parse_parameter_name(n, model_.outlet_count()));
  base_.validate(model_.outlet_count());
  apply_parameters(base_, targets_, extract_parameters(base_, targets_));
}

forward::ModelParameters BoundModel::parameters(const Eigen::VectorXd& theta) const {
  return apply_parameters(base_, targets_, theta);
}

Eigen::VectorXd BoundModel::propagate(const Eigen::VectorXd& x, const Eigen::VectorXd& theta, double t0,
                                      double t1) const {
  const auto params = parameters(theta);
  params.validate(model_.outlet_count());
  Eigen::VectorXd out = x;
  model_.advance(out, params, t0, whole_steps(t0, t1, model_.time_step()));
  return out;
}

}  // namespace kflow::pipeline
