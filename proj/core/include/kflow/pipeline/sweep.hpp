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

#ifndef KFLOW_PIPELINE_SWEEP_HPP_
#define KFLOW_PIPELINE_SWEEP_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kflow/pipeline/config.hpp"
#include "kflow/pipeline/experiment.hpp"

namespace kflow::pipeline {

enum class SweepAxis { R, VencFraction, Mask, MagnitudeSource, Innovation };

SweepAxis sweep_axis_from_string(std::string_view s);
const char* to_string(SweepAxis a);

struct SweepSpec {
  SweepAxis axis = SweepAxis::R;
  std::vector<std::string> values;
  int realizations = 1;
  int threads = 1;  // concurrent runs; 0 picks the hardware concurrency
};

// Template with one axis value substituted. Throws FormatError for values the
// axis does not accept.
ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, const std::string& value);

struct SweepRow {
  std::string value;
  int realization = 0;
  ErrorReport report;
};

// One estimation and evaluation per (value, realization), sharing the model
// and the reference run. A failing run is recorded in its row.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const SweepSpec& spec);
// Same, reusing a prepared context for `base`.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const ExperimentContext& context,
                                const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<std::string>& names,
                     const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::string& path, SweepAxis axis, const std::vector<std::string>& names,
                     const std::vector<SweepRow>& rows);

}  // namespace kflow::pipeline

#endif  // KFLOW_PIPELINE_SWEEP_HPP_
