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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kflow/forward/mesh_io.hpp"
#include "kflow/forward/navier_stokes.hpp"
#include "kflow/forward/windkessel.hpp"
#include "kflow/imaging/acquisition.hpp"
#include "kflow/imaging/encoding.hpp"
#include "kflow/imaging/fourier.hpp"
#include "kflow/imaging/sampling_mask.hpp"
#include "kflow/pipeline/commands.hpp"
#include "kflow/pipeline/config.hpp"
#include "kflow/pipeline/experiment.hpp"
#include "kflow/pipeline/model_binding.hpp"
#include "kflow/pipeline/sweep.hpp"
#include "kflow/roukf/estimation.hpp"
#include "kflow/roukf/filter.hpp"
#include "kflow/roukf/innovation.hpp"
#include "kflow/roukf/sigma_points.hpp"
#include "test_support.hpp"

namespace {

namespace im = kflow::imaging;
namespace fw = kflow::forward;
namespace kp = kflow::pipeline;
namespace rk = kflow::roukf;

const std::string kSource = KFLOW_SOURCE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records one measured quantity against its bound.
  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (!detail.empty()) detail += "; ";
  detail += buf;
  if (!ok) detail += " [x]";
  pass = pass && ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(const im::ComplexField& a, const im::ComplexField& b) { return kflow::testing::relative_error(a, b); }

// 1. dft3 / idft3 against the direct triple sum.
Outcome dft_oracle() {
  Outcome o;
  double fwd = 0.0, inv = 0.0, trip = 0.0;
  std::uint64_t seed = 11;
  for (std::size_t n : {4u, 8u}) {
    const im::VoxelGrid g({n, n, n});
    const auto x = kflow::testing::random_complex(g, seed++);
    fwd = std::max(fwd, rel(im::dft3(x), kflow::testing::naive_dft3(x, -1)));
    inv = std::max(inv, rel(im::idft3(x), kflow::testing::naive_dft3(x, +1)));
    trip = std::max(trip, rel(im::idft3(im::dft3(x)), x));
  }
  o.check(fwd < 1e-10 && inv < 1e-10, "forward %.1e, inverse %.1e (tol 1e-10)", fwd, inv);
  o.check(trip < 1e-12, "round trip %.1e (tol 1e-12)", trip);
  return o;
}

// 2. Phase-contrast encoding and decoding.
Outcome encoding() {
  Outcome o;
  const double venc = 150.0;
  const im::VoxelGrid g({64, 1, 1});
  im::ScalarField u(g), M(g, 1.0), phi(g, 0.075);
  for (std::size_t n = 0; n < g.size(); ++n) u[n] = venc * (-0.999 + 1.998 * static_cast<double>(n) / 63.0);
  const auto back = im::phase_difference_velocity(im::encode_magnetization(M, u, phi, venc), phi, venc);
  double err = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) err = std::max(err, std::abs(back[n] - u[n]));
  o.check(err / venc < 1e-12, "max |decode - u| / venc %.1e (tol 1e-12)", err / venc);
  const im::VoxelGrid one({1, 1, 1});
  const auto wrapped = im::phase_difference_velocity(
      im::encode_magnetization(im::ScalarField(one, 1.0), im::ScalarField(one, 1.5 * venc), im::ScalarField(one, 0.075),
                               venc),
      im::ScalarField(one, 0.075), venc)[0];
  o.check(std::abs(wrapped + 0.5 * venc) < 1e-12 * venc, "u = 1.5 venc decodes to %.10g venc (want -0.5)",
          wrapped / venc);
  return o;
}

// 3. Backward-Euler Windkessel against C dpi/dt + pi/Rd = Q.
Outcome windkessel() {
  Outcome o;
  const double Rd = 7200.0, C = 4e-4, RC = Rd * C, Q = 5.0, pi0 = 1e4;
  auto run = [&](double tau, double q, double start, double horizon) {
    const auto c = fw::windkessel_coefficients(fw::WindkesselParams{0.0, Rd, C}, tau);
    double pi = start, worst = 0.0;
    const int steps = static_cast<int>(std::lround(horizon / tau));
    for (int j = 1; j <= steps; ++j) {
      pi = c.alpha * pi + c.beta * q;
      const double t = j * tau;
      const double exact = q * Rd + (start - q * Rd) * std::exp(-t / RC);
      worst = std::max(worst, std::abs(pi - exact));
    }
    return std::pair{pi, worst};
  };
  const double tau = RC / 100.0;
  const auto [decay_end, decay_err] = run(tau, 0.0, pi0, 5.0 * RC);
  o.check(decay_err < 0.02 * pi0, "decay max error %.2f%% of pi0 (tol 2%%)", 100.0 * decay_err / pi0);
  const auto [charge_end, charge_err] = run(tau, Q, 0.0, 10.0 * RC);
  o.check(std::abs(charge_end / (Q * Rd) - 1.0) < 0.02, "steady state %.4f Q Rd (tol 2%%)", charge_end / (Q * Rd));
  o.check(charge_err < 0.02 * Q * Rd, "charging max error %.2f%% (tol 2%%)", 100.0 * charge_err / (Q * Rd));
  double prev = decay_err;
  double order_lo = 1e9, order_hi = 0.0;
  for (int h = 1; h <= 3; ++h) {
    const double e = run(tau / std::pow(2.0, h), 0.0, pi0, 5.0 * RC).second;
    const double order = std::log2(prev / e);
    order_lo = std::min(order_lo, order);
    order_hi = std::max(order_hi, order);
    prev = e;
  }
  (void)decay_end;
  o.check(order_lo > 0.9 && order_hi < 1.1, "observed order under halving %.3f..%.3f (want 1 +- 0.1)", order_lo,
          order_hi);
  return o;
}

// 4. Steady Poiseuille flow on the shipped tube mesh.
Outcome fem_regression() {
  Outcome o;
  const auto mesh = fw::load_mesh(kSource + "/meshes/tube.kmesh");
  fw::SolverConfig cfg;
  cfg.tau = 2e-3;
  const fw::NavierStokesModel m(mesh, fw::FluidProps{1.0, 0.5}, cfg);
  fw::ModelParameters params;
  params.inflow.kind = fw::PulseKind::Constant;
  params.inflow.U = 10.0;
  params.inflow.spatial = fw::InflowSpatial::StokesProfile;
  params.outlets = {fw::WindkesselParams{100.0, std::nullopt, std::nullopt}};
  const auto sys = m.pressure_system(params.outlets);
  auto s = m.zero_state();
  double worst = 0.0, nodal = 0.0;
  for (int j = 0; j < 500; ++j) {
    const auto prev = s;
    s = m.step(s, params, *sys);
    const double q_in = -m.space().flux(s.u, fw::kInletTag);
    double q_out = 0.0;
    for (double q : m.coupled_outlet_flows(s.p, prev.pi, *sys)) q_out += q;
    worst = std::max(worst, std::abs(q_out - q_in) / std::abs(q_in));
    nodal = std::abs(m.space().boundary_flux(s.u)) / std::abs(q_in);
  }
  // Centreline node closest to mid-length.
  double centre = 0.0, best = 1e9;
  const double mid = 0.5 * (mesh.bounding_box().first.z() + mesh.bounding_box().second.z());
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& x = mesh.nodes[i];
    if (std::hypot(x.x(), x.y()) < 1e-9 && std::abs(x.z() - mid) < best) {
      best = std::abs(x.z() - mid);
      centre = s.u[static_cast<Eigen::Index>(3 * i + 2)];
    }
  }
  const double mean = 10.0;  // the Stokes inlet profile carries mean inflow U
  o.check(std::abs(centre / (2.0 * mean) - 1.0) < 0.05, "centreline %.3f vs 2U = %.1f (%.2f%%, tol 5%%)", centre,
          2.0 * mean, 100.0 * std::abs(centre / (2.0 * mean) - 1.0));
  o.check(worst < 1e-3, "max |sum Q_out - Q_in| / Q_in over 500 steps %.2e (tol 1e-3)", worst);
  char info[96];
  std::snprintf(info, sizeof info, "; nodal P1 boundary-flux residual at the last step %.2f%% (info)", 100.0 * nodal);
  o.detail += info;
  return o;
}

// 5. Reduced filter on a scalar linear-Gaussian model and sigma-point identities.
class IdentityModel final : public rk::Model {
 public:
  Eigen::VectorXd propagate(const Eigen::VectorXd&, const Eigen::VectorXd& theta, double, double) const override {
    return theta;
  }
};

class DirectObserver final : public rk::Observer {
 public:
  DirectObserver(double y, double w_inv) : y_(y), w_inv_(w_inv) {}
  Eigen::VectorXd innovation(const Eigen::VectorXd& x, std::size_t) const override {
    return Eigen::VectorXd::Constant(1, y_ - x[0]);
  }
  Eigen::VectorXd inverse_weights(std::size_t) const override { return Eigen::VectorXd::Constant(1, w_inv_); }

 private:
  double y_, w_inv_;
};

Outcome roukf_oracle() {
  Outcome o;
  const double theta0 = 3.0, P0 = 0.4, sigma2 = 0.09, y = 3.7;
  rk::ParameterSet params;
  params.names = {"a"};
  params.theta0 = Eigen::VectorXd::Constant(1, theta0);
  params.P0 = Eigen::MatrixXd::Constant(1, 1, P0);
  params.reparam = rk::Reparam::Linear;
  const auto fs = rk::filter_step(rk::filter_init(params, Eigen::VectorXd::Zero(1)), params, IdentityModel{},
                                  DirectObserver{y, 1.0 / sigma2}, 0, 1.0);
  // Internal coordinate nu = theta / theta0 observed through H = theta0.
  const double H = theta0;
  const double mean = 1.0 + P0 * H / (H * H * P0 + sigma2) * (y - H);
  const double var = P0 * sigma2 / (H * H * P0 + sigma2);
  const double em = std::abs(fs.theta[0] - mean) / std::abs(mean);
  const double ev = std::abs(rk::parameter_covariance(fs)(0, 0) - var) / var;
  o.check(em < 1e-10 && ev < 1e-10, "posterior mean %.1e, variance %.1e relative (tol 1e-10)", em, ev);
  double worst = 0.0;
  for (int p = 1; p <= 16; ++p) {
    const auto sp = rk::canonical_sigma_points(p);
    worst = std::max(worst, (sp.alpha * sp.points.rowwise().sum()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (sp.alpha * sp.points * sp.points.transpose() - Eigen::MatrixXd::Identity(p, p))
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(worst, std::abs(sp.alpha * sp.count() - 1.0));
  }
  o.check(worst < 1e-14, "sigma-point mean/covariance/weight identities p <= 16: %.1e (tol 1e-14)", worst);
  return o;
}

kp::ExperimentConfig twin_config() { return kp::load_config(kSource + "/configs/surrogate_twin.json"); }

// Observer wrapper that tracks the largest innovation entry it hands out.
class TrackingObserver final : public rk::Observer {
 public:
  explicit TrackingObserver(const rk::Observer& inner) : inner_(inner) {}
  Eigen::VectorXd innovation(const Eigen::VectorXd& x, std::size_t n) const override {
    Eigen::VectorXd r = inner_.innovation(x, n);
    std::lock_guard<std::mutex> lock(mu_);
    max_abs_ = std::max(max_abs_, r.cwiseAbs().maxCoeff());
    return r;
  }
  Eigen::VectorXd inverse_weights(std::size_t n) const override { return inner_.inverse_weights(n); }
  double max_abs() const { return max_abs_; }

 private:
  const rk::Observer& inner_;
  mutable std::mutex mu_;
  mutable double max_abs_ = 0.0;
};

// 6. Wrapped and plain velocity innovations give the same trajectory when venc
// dwarfs the residuals.
Outcome innovation_equivalence() {
  Outcome o;
  auto cfg = twin_config();
  cfg.acquisition.snr = std::numeric_limits<double>::infinity();
  cfg.filter.innovation = rk::InnovationKind::Velocity;
  const auto ctx = kp::prepare(cfg);
  const auto archive = kp::acquire(cfg, ctx, 0);
  const auto& params = cfg.prior.parameters;
  const kp::BoundModel bound(*ctx.model, cfg.truth, params.names);
  const auto times = cfg.measurement_times();

  rk::InnovationSpec plain;
  plain.kind = rk::InnovationKind::Velocity;
  plain.sigma = 1.0;  // cm/s
  const rk::FieldObserver plain_obs(*ctx.model, archive.series, plain, archive.grid);
  const TrackingObserver tracked(plain_obs);
  const auto a = rk::estimate_run(params, bound, tracked, times, ctx.model->initial_state(), 0.0);

  rk::InnovationSpec wrapped = plain;
  wrapped.kind = rk::InnovationKind::WrappedVelocity;
  wrapped.venc = 100.0 * tracked.max_abs();
  const rk::FieldObserver wrapped_obs(*ctx.model, archive.series, wrapped, archive.grid);
  const TrackingObserver tracked_w(wrapped_obs);
  const auto b = rk::estimate_run(params, bound, tracked_w, times, ctx.model->initial_state(), 0.0);

  o.check(!a.diverged && !b.diverged && a.trajectory.size() == b.trajectory.size(), "%zu corrections each",
          a.trajectory.size());
  // Four significant digits: |a - b| at most half a unit in the fourth digit
  // of the plain-velocity value.
  double worst = 0.0, worst_rel = 0.0;
  for (std::size_t n = 0; n < std::min(a.trajectory.size(), b.trajectory.size()); ++n)
    for (Eigen::Index i = 0; i < a.trajectory[n].theta.size(); ++i) {
      const double va = a.trajectory[n].theta[i], vb = b.trajectory[n].theta[i];
      const double half_unit = 0.5 * std::pow(10.0, std::floor(std::log10(std::abs(va))) - 3.0);
      worst = std::max(worst, std::abs(va - vb) / half_unit);
      worst_rel = std::max(worst_rel, std::abs(vb / va - 1.0));
    }
  o.check(worst <= 1.0,
          "venc = 100 x max residual = %.0f cm/s, worst gap %.2f half-units of the 4th digit (tol 1), relative %.1e",
          wrapped.venc, worst, worst_rel);
  const auto ta = a.final_theta(params);
  o.detail += "; final U " + std::to_string(ta[0]) + ", Rd_1 " + std::to_string(ta[1]);
  return o;
}

// 7. The k-space innovation norm is the data-fidelity sum times 2 sigma^2.
Outcome kspace_cost() {
  Outcome o;
  const im::VoxelGrid g({8, 6, 4});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    im::ScalarField M(g), phi(g), u(g), u_true(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
      M[n] = 0.5 + 0.5 * std::abs(uni(rng));
      phi[n] = 0.3 * uni(rng);
      u[n] = 80.0 * uni(rng);
      u_true[n] = 80.0 * uni(rng);
    }
    const double venc = 100.0, sigma = 0.3 + trial;
    const auto mask = im::make_gaussian_mask(g, 3.0, 0.25, static_cast<std::uint64_t>(trial + 1));
    const auto Y = im::simulate_kspace(im::encode_magnetization(M, u_true, phi, venc), mask, sigma,
                                       static_cast<std::uint64_t>(trial + 100));
    // H_F(u) = F(M exp(i(pi u / venc + phi))) by direct summation.
    im::ComplexField m(g);
    for (std::size_t n = 0; n < g.size(); ++n) m[n] = std::polar(M[n], std::numbers::pi * u[n] / venc + phi[n]);
    const auto H = kflow::testing::naive_dft3(m, -1);
    double J = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
      if (mask(n)) {
        const auto d = Y[n] - H[n];
        J += (d.real() * d.real() + d.imag() * d.imag()) / (2.0 * sigma * sigma);
      }
    const double r2 = rk::innovation_kspace(Y, u, M, phi, venc, mask).squaredNorm();
    worst = std::max(worst, std::abs(r2 - 2.0 * sigma * sigma * J) / r2);
  }
  o.check(worst < 1e-10, "max relative gap over 5 random cases %.1e (tol 1e-10)", worst);
  return o;
}

double relative_gap(double value, double truth) { return std::abs(value / truth - 1.0); }

// 8. Surrogate twin: U and Rd_1 from k-space data.
Outcome surrogate_twin() {
  Outcome o;
  auto cfg = twin_config();
  const auto ctx = kp::prepare(cfg);
  {
    auto clean = cfg;
    clean.acquisition.snr = std::numeric_limits<double>::infinity();
    const auto archive = kp::acquire(clean, ctx, 0);
    const auto out = kp::estimate(clean, *ctx.model, archive);
    const double eU = relative_gap(out.theta[0], 75.0), eR = relative_gap(out.theta[1], 7200.0);
    o.check(!out.result.diverged && eU < 0.01 && eR < 0.01,
            "noiseless: U %.3f, Rd_1 %.1f (%.2f%%, %.2f%%; tol 1%%)", out.theta[0], out.theta[1], 100 * eU, 100 * eR);
  }
  double U = 0.0, Rd = 0.0;
  bool diverged = false;
  for (int r = 0; r < 5; ++r) {
    const auto archive = kp::acquire(cfg, ctx, r);
    const auto out = kp::estimate(cfg, *ctx.model, archive);
    diverged = diverged || out.result.diverged;
    U += out.theta[0] / 5.0;
    Rd += out.theta[1] / 5.0;
  }
  o.check(!diverged && relative_gap(U, 75.0) < 0.1 && relative_gap(Rd, 7200.0) < 0.1,
          "SNR 15, R 1, mean of 5: U %.3f, Rd_1 %.1f (%.2f%%, %.2f%%; tol 10%%)", U, Rd, 100 * relative_gap(U, 75.0),
          100 * relative_gap(Rd, 7200.0));
  return o;
}

// 9. Aortic analog on the Y mesh.
Outcome aortic_analog() {
  Outcome o;
  const auto cfg = kp::load_config(kSource + "/configs/aortic_y.json");
  const auto ctx = kp::prepare(cfg);
  const auto archive = kp::acquire(cfg, ctx, 0);
  const auto out = kp::estimate(cfg, *ctx.model, archive);
  const double eU = relative_gap(out.theta[0], 75.0);
  o.check(!out.result.diverged && eU < 0.1, "prior U 40 -> %.3f (%.2f%% from 75; tol 10%%), Rd_1 %.1f", out.theta[0],
          100 * eU, out.theta[1]);
  return o;
}

double mean_e(const std::vector<kp::SweepRow>& rows, const std::string& value, bool& failed) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows)
    if (r.value == value) {
      failed = failed || r.report.diverged || !std::isfinite(r.report.e);
      sum += r.report.e;
      ++n;
    }
  return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

// 10. Error against acceleration for both masks, and k-space against
// zero-filled velocity estimation at R = 16.
Outcome trend() {
  Outcome o;
  const auto cfg = twin_config();
  const auto ctx = kp::prepare(cfg);
  const std::vector<std::string> Rs{"1", "8", "16", "32"};
  for (auto pattern : {im::MaskPattern::Spiral, im::MaskPattern::GaussianRandom}) {
    auto c = cfg;
    c.mask.pattern = pattern;
    kp::SweepSpec spec;
    spec.axis = kp::SweepAxis::R;
    spec.values = Rs;
    spec.realizations = 5;
    spec.threads = 0;
    const auto rows = kp::run_sweep(c, ctx, spec);
    bool failed = false, monotone = true;
    std::string series;
    double prev = 0.0;
    for (const auto& R : Rs) {
      const double e = mean_e(rows, R, failed);
      monotone = monotone && e >= prev;
      prev = e;
      char buf[48];
      std::snprintf(buf, sizeof buf, "%s%.2e", series.empty() ? "" : " ", e);
      series += buf;
    }
    o.check(!failed && monotone, "%s mean e over R 1/8/16/32: %s (non-decreasing)",
            std::string(im::to_string(pattern)).c_str(), series.c_str());

    auto at16 = c;
    at16.mask.R = 16.0;
    kp::SweepSpec inn;
    inn.axis = kp::SweepAxis::Innovation;
    inn.values = {"kspace", "velocity"};
    inn.realizations = 5;
    inn.threads = 0;
    const auto irows = kp::run_sweep(at16, ctx, inn);
    bool ifailed = false;
    const double ek = mean_e(irows, "kspace", ifailed);
    const double ev = mean_e(irows, "velocity", ifailed);
    o.check(!ifailed && ek < ev, "%s R 16: k-space e %.2e < zero-filled velocity e %.2e",
            std::string(im::to_string(pattern)).c_str(), ek, ev);
  }
  return o;
}

// 11. Noise std estimated from the rest acquisition.
Outcome noise_std() {
  Outcome o;
  auto cfg = twin_config();
  cfg.acquisition.noise_std = kp::NoiseStdSource::Estimated;
  cfg.acquisition.magnitude_source = kp::MagnitudeSource::True;
  const auto ctx = kp::prepare(cfg);
  {
    const auto archive = kp::acquire(cfg, ctx, 0);
    const auto setup = kp::make_innovation(cfg, archive);
    const double gap = relative_gap(setup.noise_std_estimate, archive.sigma);
    o.check(gap < 0.03, "R 1, exact M: %.3f vs injected %.3f (%.2f%%, tol 3%%)", setup.noise_std_estimate,
            archive.sigma, 100 * gap);
  }
  auto zf = cfg;
  zf.acquisition.magnitude_source = kp::MagnitudeSource::ZeroFilledR2;
  zf.mask.pattern = im::MaskPattern::Spiral;
  double lo = 1e300, hi = 0.0;
  std::string values;
  for (double R : {8.0, 16.0, 32.0}) {
    auto c = zf;
    c.mask.R = R;
    const auto archive = kp::acquire(c, ctx, 0);
    const double s = kp::make_innovation(c, archive).noise_std_estimate;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3f", values.empty() ? "" : " ", s);
    values += buf;
  }
  o.check(hi / lo - 1.0 < 0.1, "spiral, zero-filled R 2 M, R 8/16/32: %s (spread %.2f%%, tol 10%%)", values.c_str(),
          100 * (hi / lo - 1.0));
  return o;
}

// 12. Mask acceleration and Gaussian centre density on 64 x 64.
Outcome masks() {
  Outcome o;
  const im::VoxelGrid g({64, 64, 1});
  double worst = 0.0;
  for (double R : {8.0, 16.0, 32.0}) {
    worst = std::max(worst, relative_gap(im::make_spiral_mask(g, R).achieved_R(), R));
    worst = std::max(worst, relative_gap(im::make_gaussian_mask(g, R, im::kDefaultGaussianSigmaFrac, 1).achieved_R(), R));
  }
  o.check(worst < 0.1, "max |achieved R / R - 1| %.2f%% (tol 10%%)", 100 * worst);
  int below = 0;
  double uniform = 0.0, mean_sel = 0.0;
  for (int seed = 1; seed <= 50; ++seed) {
    const auto r = kp::mask_report(im::make_gaussian_mask(g, 8.0, im::kDefaultGaussianSigmaFrac,
                                                          static_cast<std::uint64_t>(seed)));
    uniform = r.uniform_mean_radius;
    mean_sel += r.mean_selected_radius / 50.0;
    if (r.mean_selected_radius < r.uniform_mean_radius) ++below;
  }
  o.check(below == 50, "gaussian R 8: %d/50 seeds below the uniform mean radius (mean %.2f vs %.2f)", below, mean_sel,
          uniform);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit;  // s
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "DFT oracle", 1.0, dft_oracle},
      {2, "encoding consistency", 1.0, encoding},
      {3, "Windkessel 0D", 1.0, windkessel},
      {4, "FEM regression", 120.0, fem_regression},
      {5, "ROUKF oracle", 1.0, roukf_oracle},
      {6, "innovation equivalence", 10.0, innovation_equivalence},
      {7, "k-space cost consistency", 1.0, kspace_cost},
      {8, "surrogate twin", 60.0, surrogate_twin},
      {9, "aortic analog", 1800.0, aortic_analog},
      {10, "trend reproduction", 4 * 3600.0, trend},
      {11, "noise-std estimator", 60.0, noise_std},
      {12, "mask properties", 10.0, masks},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    o.check(dt < c.limit, "%.2f s (limit %.0f s)", dt, c.limit);
    if (!o.pass) ++failed;
    std::printf("%s %2d %-26s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
