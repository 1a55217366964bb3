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

#include "kflow/pipeline/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "kflow/error.hpp"
#include "kflow/forward/mesh_generation.hpp"
#include "kflow/forward/mesh_io.hpp"
#include "kflow/forward/navier_stokes.hpp"
#include "kflow/forward/surrogate.hpp"
#include "kflow/imaging/acquisition.hpp"
#include "kflow/imaging/encoding.hpp"
#include "kflow/pipeline/model_binding.hpp"

namespace kflow::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ScalarField constant_field(const imaging::VoxelGrid& g, double v) { return ScalarField(g, v); }

ScalarField product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
  return out;
}

// Gaussian R = 2 mask for the magnitude calibration scan.
imaging::SamplingMask calibration_mask(const imaging::VoxelGrid& grid, const MaskSpec& spec) {
  return imaging::make_gaussian_mask(grid, 2.0, imaging::kDefaultGaussianSigmaFrac,
                                     splitmix64(spec.seed ^ 0x5ca1ab1eULL));
}

}  // namespace

std::unique_ptr<forward::FlowModel> build_model(const ExperimentConfig& config) {
  const auto& m = config.model;
  std::unique_ptr<forward::FlowModel> model;
  if (m.kind == ModelKind::Surrogate) {
    model = std::make_unique<forward::SurrogateModel>(m.surrogate, m.tau);
  } else {
    forward::Mesh mesh;
    if (m.mesh == "builtin:tube") mesh = forward::make_tube_mesh();
    else if (m.mesh == "builtin:y") mesh = forward::make_y_mesh();
    else mesh = forward::load_mesh(config.resolve(m.mesh).string());
    auto solver = m.solver;
    solver.tau = m.tau;
    model = std::make_unique<forward::NavierStokesModel>(std::move(mesh), m.fluid, solver);
  }
  if (static_cast<std::size_t>(model->outlet_count()) != config.truth.outlets.size())
    throw FormatError("config: the model has " + std::to_string(model->outlet_count()) +
                      " outlets but 'truth.outlets' lists " + std::to_string(config.truth.outlets.size()));
  return model;
}

imaging::VoxelGrid build_grid(const ExperimentConfig& config, const forward::FlowModel& model) {
  const auto [lo, hi] = model.bounding_box();
  const Vec3 h = Vec3::Constant(config.acquisition.spacing);
  if (!config.acquisition.dims) return imaging::VoxelGrid::covering(lo, hi, h, config.acquisition.padding);
  const auto d = *config.acquisition.dims;
  Vec3 origin;
  for (int a = 0; a < 3; ++a) {
    if (d[static_cast<std::size_t>(a)] < 1) throw FormatError("config: 'acquisition.dims' must be >= 1");
    origin[a] = 0.5 * (lo[a] + hi[a]) - 0.5 * h[a] * static_cast<double>(d[static_cast<std::size_t>(a)] - 1);
  }
  return imaging::VoxelGrid(d, h, origin);
}

imaging::SamplingMask build_mask(const imaging::VoxelGrid& grid, const MaskSpec& spec) {
  switch (spec.pattern) {
    case imaging::MaskPattern::Full: return imaging::make_full_mask(grid);
    case imaging::MaskPattern::Spiral: return imaging::make_spiral_mask(grid, spec.R, spec.turns);
    case imaging::MaskPattern::GaussianRandom:
      return imaging::make_gaussian_mask(grid, spec.R, spec.sigma_frac, spec.seed);
    case imaging::MaskPattern::Composed: break;
  }
  throw InvalidArgument("build_mask: composed masks are not built from a spec");
}

std::vector<Eigen::VectorXd> simulate_samples(const forward::FlowModel& model,
                                              const forward::ModelParameters& params,
                                              const std::vector<double>& times) {
  Eigen::VectorXd x = model.initial_state();
  std::vector<Eigen::VectorXd> out;
  out.reserve(times.size());
  double t = 0.0;
  for (double ti : times) {
    model.advance(x, params, t, whole_steps(t, ti, model.time_step()));
    out.push_back(model.velocity_samples(x));
    t = ti;
  }
  return out;
}

double trajectory_error(const std::vector<Eigen::VectorXd>& reference,
                        const std::vector<Eigen::VectorXd>& recon) {
  if (reference.size() != recon.size()) throw InvalidArgument("trajectory_error: instant counts differ");
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < reference.size(); ++n) {
    if (reference[n].size() != recon[n].size()) throw InvalidArgument("trajectory_error: sample counts differ");
    num += (reference[n] - recon[n]).squaredNorm();
    den += reference[n].squaredNorm();
  }
  if (!(den > 0.0)) throw InvalidArgument("trajectory_error: reference flow is zero");
  return std::sqrt(num / den);
}

ReferenceRun simulate_reference(const forward::FlowModel& model, const ExperimentConfig& config,
                                const imaging::VoxelGrid& grid) {
  ReferenceRun ref;
  ref.times = config.measurement_times();
  ref.lumen = model.lumen_mask(grid);
  if (std::none_of(ref.lumen.begin(), ref.lumen.end(), [](std::uint8_t v) { return v != 0; }))
    throw InvalidArgument("the image grid does not overlap the geometry");
  Eigen::VectorXd x = model.initial_state();
  double t = 0.0;
  for (double ti : ref.times) {
    // Same stepping as simulate_samples, so the samples agree bit for bit.
    model.advance(x, config.truth, t, whole_steps(t, ti, model.time_step()));
    t = ti;
    ref.samples.push_back(model.velocity_samples(x));
    std::vector<ScalarField> per_dir;
    for (const auto& d : config.acquisition.directions) {
      per_dir.push_back(model.observe_velocity(x, d, grid));
      for (double v : per_dir.back().values) ref.max_speed = std::max(ref.max_speed, std::abs(v));
    }
    ref.velocity.push_back(std::move(per_dir));
  }
  return ref;
}

ExperimentContext prepare(const ExperimentConfig& config) {
  config.validate();
  ExperimentContext ctx;
  ctx.model = build_model(config);
  ctx.grid = build_grid(config, *ctx.model);
  ctx.reference = simulate_reference(*ctx.model, config, ctx.grid);
  return ctx;
}

std::vector<ScalarField> coil_sensitivities(const imaging::VoxelGrid& grid, int coils) {
  if (coils < 1) throw InvalidArgument("coil_sensitivities: needs at least one coil");
  if (coils == 1) return {constant_field(grid, 1.0)};
  const Vec3 lo = grid.center(0, 0, 0);
  const Vec3 hi = grid.center(grid.dims[0] - 1, grid.dims[1] - 1, grid.dims[2] - 1);
  const Vec3 mid = 0.5 * (lo + hi);
  const double radius = 0.5 * std::max({hi.x() - lo.x(), hi.y() - lo.y(), grid.spacing.x()});
  std::vector<ScalarField> out;
  for (int c = 0; c < coils; ++c) {
    const double a = 2.0 * std::numbers::pi * c / coils;
    const Vec3 center = mid + radius * Vec3(std::cos(a), std::sin(a), 0.0);
    ScalarField s(grid);
    double peak = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      s[n] = std::exp(-(grid.center(n) - center).squaredNorm() / (2.0 * radius * radius));
      peak = std::max(peak, s[n]);
    }
    for (auto& v : s.values) v /= peak;
    out.push_back(std::move(s));
  }
  return out;
}

double resolve_venc(const ExperimentConfig& config, const ReferenceRun& reference) {
  if (config.acquisition.venc_policy == VencPolicy::Absolute) return config.acquisition.venc;
  if (!(reference.max_speed > 0.0)) throw InvalidArgument("relative venc needs a nonzero reference flow");
  return config.acquisition.venc * reference.max_speed;
}

std::uint64_t noise_seed(std::uint64_t seed, int realization, std::size_t frame, std::size_t direction,
                         std::size_t coil) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(realization));
  h = splitmix64(h ^ frame);
  h = splitmix64(h ^ direction);
  return splitmix64(h ^ coil);
}

SeriesArchive acquire(const ExperimentConfig& config, const ExperimentContext& ctx, int realization) {
  const auto& acq = config.acquisition;
  const auto& grid = ctx.grid;
  const auto& ref = ctx.reference;
  const bool kspace = config.filter.innovation == roukf::InnovationKind::KSpace;
  const std::size_t D = acq.directions.size();
  const auto C = static_cast<std::size_t>(acq.coils);

  SeriesArchive a;
  a.grid = grid;
  a.coils = acq.coils;
  a.seed = config.seed;
  a.realization = realization;
  a.config_json = config_to_json(config);
  a.venc = resolve_venc(config, ref);
  a.reference = ref.samples;

  ScalarField M(grid);
  for (std::size_t n = 0; n < grid.size(); ++n)
    M[n] = ref.lumen[n] ? acq.lumen_magnitude : acq.background_magnitude;
  a.phi_back = constant_field(grid, acq.phi_back);
  a.sigma = imaging::snr_to_sigma(M, ref.lumen, acq.snr);
  a.velocity_sigma =
      a.venc / std::numbers::pi * a.sigma / std::sqrt(static_cast<double>(grid.size())) / acq.lumen_magnitude;

  const auto sens = coil_sensitivities(grid, acq.coils);
  for (const auto& s : sens) a.magnitude_true.push_back(product(M, s));

  const auto mask = build_mask(grid, config.mask);
  a.series.directions = acq.directions;
  a.series.masks = {mask};

  for (std::size_t n = 0; n < ref.times.size(); ++n) {
    roukf::MeasurementFrame f;
    f.time = ref.times[n];
    f.mask_index.assign(D, 0);
    if (kspace) f.kspace.resize(D);
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t c = 0; c < C; ++c) {
        const auto m = imaging::encode_magnetization(a.magnitude_true[c], ref.velocity[n][d], a.phi_back, a.venc);
        auto y = imaging::simulate_kspace(m, mask, a.sigma, noise_seed(config.seed, realization, n + 1, d, c));
        if (kspace) {
          f.kspace[d].push_back(std::move(y));
        } else {
          f.velocity.push_back(imaging::phase_difference_velocity(
              imaging::zero_filled_reconstruction(y, mask), a.phi_back, a.venc));
        }
      }
    }
    a.series.frames.push_back(std::move(f));
  }

  if (kspace) {
    const ScalarField rest(grid, 0.0);
    a.calibration.resize(D);
    for (std::size_t d = 0; d < D; ++d)
      for (std::size_t c = 0; c < C; ++c) {
        const auto m = imaging::encode_magnetization(a.magnitude_true[c], rest, a.phi_back, a.venc);
        a.calibration[d].push_back(
            imaging::simulate_kspace(m, mask, a.sigma, noise_seed(config.seed, realization, 0, d, c)));
      }
    // The magnitude scan is one more rest acquisition with its own noise draw.
    const auto r2 = calibration_mask(grid, config.mask);
    for (std::size_t c = 0; c < C; ++c) {
      const auto m = imaging::encode_magnetization(a.magnitude_true[c], rest, a.phi_back, a.venc);
      const auto y = imaging::simulate_kspace(m, r2, a.sigma, noise_seed(config.seed, realization, 0, D, c));
      a.magnitude_zf_r2.push_back(imaging::magnitude_of(imaging::zero_filled_reconstruction(y, r2)));
    }
  }
  return a;
}

InnovationSetup make_innovation(const ExperimentConfig& config, const SeriesArchive& a) {
  const auto kind = config.filter.innovation;
  if ((kind == roukf::InnovationKind::KSpace) != a.series.is_kspace())
    throw FormatError("the series kind does not match 'filter.innovation'");
  const double N = static_cast<double>(a.grid.size());
  const double fallback_sigma = config.acquisition.lumen_magnitude * std::sqrt(N) / config.filter.assumed_snr;

  InnovationSetup setup;
  setup.spec.kind = kind;
  setup.spec.venc = a.venc;
  setup.noise_std_estimate = kNaN;
  if (kind != roukf::InnovationKind::KSpace) {
    const double s = a.velocity_sigma > 0.0 ? a.velocity_sigma
                                            : a.venc / std::numbers::pi * fallback_sigma / std::sqrt(N) /
                                                  config.acquisition.lumen_magnitude;
    setup.spec.sigma = s;
    return setup;
  }

  const auto& mask = a.series.masks.at(0);
  double estimate_sum = 0.0;
  int estimate_count = 0;
  for (int c = 0; c < a.coils; ++c) {
    roukf::CoilChannel ch;
    switch (config.acquisition.magnitude_source) {
      case MagnitudeSource::True: ch.magnitude = a.magnitude_true.at(static_cast<std::size_t>(c)); break;
      case MagnitudeSource::ZeroFilledR2: ch.magnitude = a.magnitude_zf_r2.at(static_cast<std::size_t>(c)); break;
      case MagnitudeSource::Constant: ch.magnitude = constant_field(a.grid, 0.5); break;
    }
    ch.phi_back = a.phi_back;
    if (config.acquisition.noise_std == NoiseStdSource::Estimated) {
      double s = 0.0;
      for (const auto& per_coil : a.calibration)
        s += imaging::estimate_noise_std(per_coil.at(static_cast<std::size_t>(c)), ch.magnitude, a.phi_back, mask);
      s /= static_cast<double>(a.calibration.size());
      estimate_sum += s;
      ++estimate_count;
      ch.sigma = s;
    } else {
      ch.sigma = a.sigma;
    }
    if (!(ch.sigma > 0.0)) ch.sigma = fallback_sigma;
    setup.spec.coils.push_back(std::move(ch));
  }
  if (estimate_count > 0) setup.noise_std_estimate = estimate_sum / estimate_count;
  return setup;
}

EstimateOutcome estimate(const ExperimentConfig& config, const forward::FlowModel& model,
                         const SeriesArchive& archive) {
  const auto start = std::chrono::steady_clock::now();
  const auto& params = config.prior.parameters;
  const InnovationSetup setup = make_innovation(config, archive);
  const BoundModel bound(model, config.truth, params.names);
  const roukf::FieldObserver observer(model, archive.series, setup.spec, archive.grid);

  roukf::EstimationOptions options;
  options.skip_first = config.filter.skip_first;
  options.filter.threads = config.filter.threads;

  EstimateOutcome out;
  out.result = roukf::estimate_run(params, bound, observer, archive.series.times(), model.initial_state(), 0.0,
                                   options);
  out.theta = out.result.final_theta(params);
  out.variance = roukf::parameter_covariance(out.result.final_state).diagonal();
  out.noise_std_estimate = setup.noise_std_estimate;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double evaluate_error(const ExperimentConfig& config, const forward::FlowModel& model,
                      const Eigen::VectorXd& theta, const std::vector<Eigen::VectorXd>& reference) {
  std::vector<ParameterTarget> targets;
  for (const auto& n : config.prior.parameters.names)
    targets.push_back(parse_parameter_name(n, model.outlet_count()));
  const auto params = apply_parameters(config.truth, targets, theta);
  params.validate(model.outlet_count());
  return trajectory_error(reference, simulate_samples(model, params, config.measurement_times()));
}

ErrorReport make_report(const ExperimentConfig& config, const forward::FlowModel& model,
                        const SeriesArchive& archive, const EstimateOutcome& outcome) {
  ErrorReport r;
  r.names = config.prior.parameters.names;
  r.theta = outcome.theta;
  r.variance = outcome.variance;
  r.achieved_R = archive.series.masks.at(0).achieved_R();
  r.noise_std_estimate = outcome.noise_std_estimate;
  r.wall_time = outcome.wall_time;
  r.diverged = outcome.result.diverged;
  r.failure = outcome.result.failure;
  try {
    r.e = evaluate_error(config, model, outcome.theta, archive.reference);
  } catch (const std::exception& e) {
    r.e = kNaN;
    if (r.failure.empty()) r.failure = e.what();
  }
  return r;
}

std::string report_to_json(const ErrorReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json j;
  j["e"] = num(r.e);
  nlohmann::json est = nlohmann::json::object();
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    est[r.names[i]] = {{"value", num(r.theta.size() > k ? r.theta[k] : kNaN)},
                       {"variance", num(r.variance.size() > k ? r.variance[k] : kNaN)}};
  }
  j["parameters"] = est;
  j["achieved_R"] = num(r.achieved_R);
  j["noise_std_estimate"] = num(r.noise_std_estimate);
  j["wall_time"] = r.wall_time;
  j["diverged"] = r.diverged;
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j.dump(2);
}

}  // namespace kflow::pipeline
