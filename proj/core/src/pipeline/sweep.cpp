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

#include "kflow/pipeline/sweep.hpp"

#include <atomic>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

#include "kflow/error.hpp"

namespace kflow::pipeline {

SweepAxis sweep_axis_from_string(std::string_view s) {
  if (s == "R") return SweepAxis::R;
  if (s == "venc_fraction") return SweepAxis::VencFraction;
  if (s == "mask") return SweepAxis::Mask;
  if (s == "magnitude_source") return SweepAxis::MagnitudeSource;
  if (s == "innovation") return SweepAxis::Innovation;
  throw FormatError("unknown sweep axis '" + std::string(s) + "'");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::R: return "R";
    case SweepAxis::VencFraction: return "venc_fraction";
    case SweepAxis::Mask: return "mask";
    case SweepAxis::MagnitudeSource: return "magnitude_source";
    case SweepAxis::Innovation: return "innovation";
  }
  return "R";
}

ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, const std::string& value) {
  ExperimentConfig c = base;
  auto number = [&]() {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw FormatError("sweep: '" + value + "' is not a number");
    }
  };
  try {
    switch (axis) {
      case SweepAxis::R:
        c.mask.R = number();
        if (c.mask.R == 1.0) c.mask.pattern = imaging::MaskPattern::Full;
        break;
      case SweepAxis::VencFraction:
        c.acquisition.venc_policy = VencPolicy::Fraction;
        c.acquisition.venc = number();
        break;
      case SweepAxis::Mask: c.mask.pattern = imaging::mask_pattern_from_string(value); break;
      case SweepAxis::MagnitudeSource: c.acquisition.magnitude_source = magnitude_source_from_string(value); break;
      case SweepAxis::Innovation: c.filter.innovation = roukf::innovation_kind_from_string(value); break;
    }
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("sweep: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const SweepSpec& spec) {
  const ExperimentContext ctx = prepare(base);
  return run_sweep(base, ctx, spec);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const ExperimentContext& ctx,
                                const SweepSpec& spec) {
  if (spec.values.empty()) throw FormatError("sweep: no axis values");
  if (spec.realizations < 1) throw FormatError("sweep: realizations must be >= 1");
  // Validate every value before spending time on runs.
  std::vector<ExperimentConfig> configs;
  for (const auto& v : spec.values) configs.push_back(apply_axis(base, spec.axis, v));

  const std::size_t R = static_cast<std::size_t>(spec.realizations);
  const std::size_t total = configs.size() * R;
  std::vector<SweepRow> rows(total);
  auto run = [&](std::size_t i) {
    const std::size_t vi = i / R;
    SweepRow& row = rows[i];
    row.value = spec.values[vi];
    row.realization = static_cast<int>(i % R);
    ExperimentConfig cfg = configs[vi];
    // Runs are already concurrent; particles inside a run stay sequential.
    if (spec.threads != 1) cfg.filter.threads = 1;
    row.report.names = cfg.prior.parameters.names;
    try {
      const SeriesArchive archive = acquire(cfg, ctx, row.realization);
      const EstimateOutcome outcome = estimate(cfg, *ctx.model, archive);
      row.report = make_report(cfg, *ctx.model, archive, outcome);
    } catch (const std::exception& e) {
      row.report.e = std::numeric_limits<double>::quiet_NaN();
      row.report.diverged = true;
      row.report.failure = e.what();
    }
  };

  int threads = spec.threads <= 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                                  : spec.threads;
  threads = std::min<int>(threads, static_cast<int>(total));
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) run(i);
      });
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, const std::vector<std::string>& names,
                     const std::vector<SweepRow>& rows) {
  out << to_string(axis) << ",realization,e,achieved_R,noise_std";
  for (const auto& n : names) out << ',' << n;
  for (const auto& n : names) out << ",var_" << n;
  out << ",diverged,wall_time,failure\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows) {
    out << r.value << ',' << r.realization << ',' << r.report.e << ',' << r.report.achieved_R << ','
        << r.report.noise_std_estimate;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      out << ',';
      if (r.report.theta.size() > k) out << r.report.theta[k];
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      out << ',';
      if (r.report.variance.size() > k) out << r.report.variance[k];
    }
    std::string failure = r.report.failure;
    for (auto& ch : failure)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    out << ',' << (r.report.diverged ? 1 : 0) << ',' << r.report.wall_time << ',' << failure << '\n';
  }
}

void write_sweep_csv(const std::string& path, SweepAxis axis, const std::vector<std::string>& names,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_sweep_csv(out, axis, names, rows);
}

}  // namespace kflow::pipeline
