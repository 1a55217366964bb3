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

#include "kflow/pipeline/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "kflow/error.hpp"
#include "kflow/io/hashing.hpp"
#include "kflow/io/kfe_container.hpp"

namespace kflow::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out) throw FormatError("cannot write " + path.string());
}

std::string realization_dir(int r) {
  std::ostringstream s;
  s << "realization_" << std::setw(3) << std::setfill('0') << r;
  return s.str();
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

// Stores a dense r x c matrix as a KFE1 real field with dims {r, c, 1}.
void save_matrix(const fs::path& path, const Eigen::MatrixXd& m) {
  imaging::ScalarField f(imaging::VoxelGrid({static_cast<std::size_t>(std::max<Eigen::Index>(m.rows(), 1)),
                                             static_cast<std::size_t>(std::max<Eigen::Index>(m.cols(), 1)), 1}));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      f.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j), 0) = m(i, j);
  io::save(path.string(), f);
}

void check_series_matches(const ExperimentConfig& config, const forward::FlowModel& model,
                          const SeriesArchive& a) {
  if (a.grid != build_grid(config, model)) throw FormatError("series grid does not match the config");
  const auto times = config.measurement_times();
  const auto series_times = a.series.times();
  if (times.size() != series_times.size()) throw FormatError("series measurement count does not match the config");
  for (std::size_t n = 0; n < times.size(); ++n)
    if (std::abs(times[n] - series_times[n]) > 1e-9) throw FormatError("series instants do not match the config");
  if (a.series.directions.size() != config.acquisition.directions.size())
    throw FormatError("series directions do not match the config");
  if ((config.filter.innovation == roukf::InnovationKind::KSpace) != a.series.is_kspace())
    throw FormatError("series kind does not match 'filter.innovation'");
}

}  // namespace

std::vector<fs::path> cmd_generate(const ExperimentConfig& config, const fs::path& out) {
  const ExperimentContext ctx = prepare(config);
  fs::create_directories(out);
  std::vector<fs::path> dirs;
  json run;
  run["config"] = json::parse(config_to_json(config));
  run["measurement_count"] = ctx.reference.times.size();
  run["max_speed"] = ctx.reference.max_speed;
  run["venc"] = resolve_venc(config, ctx.reference);
  json series = json::array();
  for (int r = 0; r < config.realizations; ++r) {
    const fs::path dir = out / realization_dir(r);
    write_series(dir, acquire(config, ctx, r));
    series.push_back({{"dir", realization_dir(r)}, {"manifest_sha256", io::sha256_file((dir / "manifest.json").string())}});
    dirs.push_back(dir);
  }
  run["series"] = series;
  write_text(out / "run.json", run.dump(2));
  return dirs;
}

EstimateOutcome cmd_estimate(const ExperimentConfig& config, const fs::path& series, const fs::path& out) {
  const auto model = build_model(config);
  const SeriesArchive archive = read_series(series);
  check_series_matches(config, *model, archive);
  EstimateOutcome outcome = estimate(config, *model, archive);

  fs::create_directories(out);
  const auto& params = config.prior.parameters;
  roukf::write_trajectory_csv((out / "trajectory.csv").string(), params, outcome.result.trajectory);

  json est;
  json values = json::object();
  for (int i = 0; i < params.size(); ++i)
    values[params.names[static_cast<std::size_t>(i)]] = {{"value", outcome.theta[i]},
                                                         {"variance", outcome.variance[i]}};
  est["parameters"] = values;
  est["diverged"] = outcome.result.diverged;
  if (outcome.result.diverged) {
    est["failure"] = outcome.result.failure;
    est["failed_particle"] = outcome.result.failed_particle;
  }
  est["corrections"] = outcome.result.trajectory.size();
  if (std::isfinite(outcome.noise_std_estimate)) est["noise_std_estimate"] = outcome.noise_std_estimate;
  est["series_manifest_sha256"] = io::sha256_file((series / "manifest.json").string());
  est["wall_time"] = outcome.wall_time;
  write_text(out / "estimate.json", est.dump(2));

  const auto& fs_ = outcome.result.final_state;
  save_matrix(out / "filter_state_x.kfe", fs_.x);
  save_matrix(out / "filter_state_LX.kfe", fs_.L_X);
  json st;
  st["theta_internal"] = vector_json(fs_.theta);
  st["L_theta"] = matrix_json(fs_.L_theta);
  st["U"] = matrix_json(fs_.U);
  st["step"] = fs_.step;
  st["time"] = fs_.time;
  st["x"] = {{"file", "filter_state_x.kfe"}, {"sha256", io::sha256_file((out / "filter_state_x.kfe").string())}};
  st["L_X"] = {{"file", "filter_state_LX.kfe"}, {"sha256", io::sha256_file((out / "filter_state_LX.kfe").string())}};
  write_text(out / "filter_state.json", st.dump(2));
  return outcome;
}

Eigen::VectorXd read_estimate(const fs::path& path, const std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    const json j = json::parse(in);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < names.size(); ++i)
      theta[static_cast<Eigen::Index>(i)] = j.at("parameters").at(names[i]).at("value").get<double>();
    return theta;
  } catch (const json::exception& e) {
    throw FormatError("bad estimate file " + path.string() + ": " + e.what());
  }
}

ErrorReport cmd_evaluate(const ExperimentConfig& config, const fs::path& series, const Eigen::VectorXd& theta,
                         const fs::path& out) {
  const auto model = build_model(config);
  const SeriesArchive archive = read_series(series);
  check_series_matches(config, *model, archive);
  if (archive.reference.empty()) throw FormatError("series carries no reference trajectory");
  ErrorReport r;
  r.names = config.prior.parameters.names;
  r.theta = theta;
  r.variance = Eigen::VectorXd::Constant(theta.size(), std::numeric_limits<double>::quiet_NaN());
  r.achieved_R = archive.series.masks.at(0).achieved_R();
  r.noise_std_estimate = std::numeric_limits<double>::quiet_NaN();
  r.e = evaluate_error(config, *model, theta, archive.reference);
  fs::create_directories(out);
  write_text(out / "report.json", report_to_json(r));
  return r;
}

MaskReport mask_report(const imaging::SamplingMask& mask) {
  MaskReport r;
  r.target_R = mask.target_R;
  r.achieved_R = mask.achieved_R();
  r.selected = mask.count();
  const auto& d = mask.grid.dims;
  double sum = 0.0;
  for (std::size_t j = 0; j < d[1]; ++j)
    for (std::size_t i = 0; i < d[0]; ++i) {
      if (mask(mask.grid.index(i, j, 0))) ++r.in_plane_selected;
      const double kx = imaging::centered_frequency(i, d[0]);
      const double ky = imaging::centered_frequency(j, d[1]);
      sum += std::hypot(kx, ky);
    }
  r.uniform_mean_radius = sum / static_cast<double>(d[0] * d[1]);
  r.mean_selected_radius = imaging::mean_selected_radius(mask);
  return r;
}

MaskReport cmd_mask(const imaging::VoxelGrid& grid, const MaskSpec& spec, const fs::path& out) {
  const auto mask = build_mask(grid, spec);
  fs::create_directories(out);
  io::save((out / "mask.kfe").string(), mask);
  imaging::write_mask_pgm(mask, (out / "mask.pgm").string());
  const MaskReport r = mask_report(mask);
  json j = {{"pattern", std::string(imaging::to_string(spec.pattern))},
            {"dims", grid.dims},
            {"seed", spec.seed},
            {"target_R", r.target_R},
            {"achieved_R", r.achieved_R},
            {"selected", r.selected},
            {"in_plane_selected", r.in_plane_selected},
            {"mean_selected_radius", r.mean_selected_radius},
            {"uniform_mean_radius", r.uniform_mean_radius}};
  write_text(out / "mask.json", j.dump(2));
  return r;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config, const SweepSpec& spec, const fs::path& out) {
  auto rows = run_sweep(config, spec);
  fs::create_directories(out);
  write_sweep_csv((out / "sweep.csv").string(), spec.axis, config.prior.parameters.names, rows);
  return rows;
}

}  // namespace kflow::pipeline
