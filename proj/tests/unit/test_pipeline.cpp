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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "json.hpp"
#include "kflow/error.hpp"
#include "kflow/io/kfe_container.hpp"
#include "kflow/pipeline/commands.hpp"
#include "kflow/pipeline/config.hpp"
#include "kflow/pipeline/experiment.hpp"
#include "kflow/pipeline/model_binding.hpp"
#include "kflow/pipeline/series.hpp"
#include "kflow/pipeline/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using namespace kflow::pipeline;
using nlohmann::json;

const fs::path kConfigs = fs::path(KFLOW_SOURCE_DIR) / "configs";

json shipped(const char* name) {
  std::ifstream in(kConfigs / name);
  return json::parse(in);
}

// The surrogate twin on a coarse grid over a shortened window.
json small_twin() {
  json j = shipped("surrogate_twin.json");
  j["acquisition"]["spacing"] = 0.4;
  j["acquisition"]["dims"] = {16, 8, 18};
  j["acquisition"]["duration"] = 0.3;
  return j;
}

ExperimentConfig parse(const json& j) { return parse_config(j.dump(), kConfigs); }

fs::path scratch(const std::string& leaf) {
  const fs::path p = fs::temp_directory_path() / "kflow_pipeline_tests" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Eigen::VectorXd truth_theta(const ExperimentConfig& c) {
  std::vector<ParameterTarget> t;
  for (const auto& n : c.prior.parameters.names)
    t.push_back(parse_parameter_name(n, static_cast<int>(c.truth.outlets.size())));
  return extract_parameters(c.truth, t);
}

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"surrogate_twin.json", "aortic_y.json"}) {
    const auto c = load_config(kConfigs / name);
    EXPECT_NO_THROW(c.validate()) << name;
    EXPECT_EQ(c.prior.parameters.names, (std::vector<std::string>{"U", "Rd_1"})) << name;
  }
}

TEST(Config, OneCycleGivesFiftyThreeInstantsOnWholeSteps) {
  const auto c = load_config(kConfigs / "surrogate_twin.json");
  const auto t = c.measurement_times();
  ASSERT_EQ(t.size(), 53u);  // floor(0.8 / 0.015)
  for (std::size_t n = 0; n < t.size(); ++n) {
    EXPECT_NEAR(t[n], 0.015 * static_cast<double>(n + 1), 1e-12);
    EXPECT_EQ(whole_steps(n == 0 ? 0.0 : t[n - 1], t[n], c.model.tau), 15);
  }
  EXPECT_THROW(whole_steps(0.0, 0.0155, 1e-3), kflow::InvalidArgument);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  auto expect_format_error = [](json j, const std::string& needle) {
    try {
      parse(j);
      ADD_FAILURE() << "accepted: " << needle;
    } catch (const kflow::FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  json j = small_twin();
  j["acquisition"]["sped"] = 1;
  expect_format_error(j, "acquisition.sped");
  j = small_twin();
  j["prior"]["parameters"][1]["name"] = "Rd_3";
  expect_format_error(j, "Rd_3");
  j = small_twin();
  j["mask"]["pattern"] = "radial";
  expect_format_error(j, "radial");
  j = small_twin();
  j["acquisition"]["dt_meas"] = 0.0155;
  expect_format_error(j, "dt_meas");
  EXPECT_THROW(parse_config("{not json"), kflow::FormatError);
}

TEST(Config, CanonicalEchoRoundTrips) {
  json j = small_twin();
  j["acquisition"]["snr"] = "inf";
  const auto c = parse(j);
  EXPECT_TRUE(std::isinf(c.acquisition.snr));
  const std::string echo = config_to_json(c);
  EXPECT_EQ(config_to_json(parse_config(echo, kConfigs)), echo);
}

TEST(ModelBinding, NamesMapOntoModelParameters) {
  const auto c = parse(small_twin());
  const std::vector<ParameterTarget> t{parse_parameter_name("U", 2), parse_parameter_name("Rp_2", 2),
                                       parse_parameter_name("C_1", 2)};
  const Eigen::Vector3d theta(60.0, 150.0, 5e-4);
  const auto p = apply_parameters(c.truth, t, theta);
  EXPECT_EQ(p.inflow.U, 60.0);
  EXPECT_EQ(p.outlets[1].Rp, 150.0);
  EXPECT_EQ(*p.outlets[0].C, 5e-4);
  EXPECT_EQ(*p.outlets[0].Rd, 7200.0);
  EXPECT_EQ(extract_parameters(p, t), theta);
  EXPECT_THROW(parse_parameter_name("Rd_0", 2), kflow::InvalidArgument);
  EXPECT_THROW(parse_parameter_name("kappa", 2), kflow::InvalidArgument);
  auto resistance = c.truth;
  resistance.outlets[0] = {100.0, std::nullopt, std::nullopt};
  EXPECT_THROW(apply_parameters(resistance, {parse_parameter_name("Rd_1", 2)}, Eigen::VectorXd::Ones(1)),
               kflow::InvalidArgument);
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_ = new ExperimentConfig(parse(small_twin()));
    ctx_ = new ExperimentContext(prepare(*config_));
  }
  static void TearDownTestSuite() {
    delete ctx_;
    delete config_;
  }
  static ExperimentConfig* config_;
  static ExperimentContext* ctx_;
};
ExperimentConfig* PipelineTest::config_ = nullptr;
ExperimentContext* PipelineTest::ctx_ = nullptr;

TEST_F(PipelineTest, SeriesDirectoriesAreByteIdentical) {
  const auto a = scratch("series_a"), b = scratch("series_b");
  write_series(a, acquire(*config_, *ctx_, 0));
  write_series(b, acquire(*config_, *ctx_, 0));
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
  }
  EXPECT_GT(files, config_->measurement_times().size());
  // A different realization draws different noise.
  const auto c = scratch("series_c");
  write_series(c, acquire(*config_, *ctx_, 1));
  EXPECT_NE(slurp(a / "frame_0001_d0_c0.kfe"), slurp(c / "frame_0001_d0_c0.kfe"));
}

TEST_F(PipelineTest, SeriesRoundTripAndTamperDetection) {
  const auto dir = scratch("series_rt");
  const auto archive = acquire(*config_, *ctx_, 0);
  write_series(dir, archive);
  const auto back = read_series(dir);
  ASSERT_EQ(back.series.frames.size(), archive.series.frames.size());
  EXPECT_EQ(back.series.frames[7].kspace[0][0].values, archive.series.frames[7].kspace[0][0].values);
  EXPECT_EQ(back.series.times(), archive.series.times());
  EXPECT_EQ(back.venc, archive.venc);
  EXPECT_EQ(back.sigma, archive.sigma);
  ASSERT_EQ(back.reference.size(), archive.reference.size());
  EXPECT_EQ(back.reference[3], archive.reference[3]);

  // Flip one payload byte of a frame.
  {
    std::fstream f(dir / "frame_0003_d0_c0.kfe", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(200);
    char c = 0;
    f.read(&c, 1);
    f.seekp(200);
    c = static_cast<char>(c ^ 0x01);
    f.write(&c, 1);
  }
  EXPECT_THROW(read_series(dir), kflow::FormatError);
  write_series(dir, archive);
  fs::remove(dir / "phi_back.kfe");
  EXPECT_THROW(read_series(dir), kflow::FormatError);
}

TEST_F(PipelineTest, ErrorIsZeroAtTheTruthAndShrinksAfterEstimation) {
  const auto archive = acquire(*config_, *ctx_, 0);
  EXPECT_EQ(evaluate_error(*config_, *ctx_->model, truth_theta(*config_), archive.reference), 0.0);
  const double e_prior = evaluate_error(*config_, *ctx_->model, config_->prior.parameters.theta0, archive.reference);
  const auto outcome = estimate(*config_, *ctx_->model, archive);
  ASSERT_FALSE(outcome.result.diverged) << outcome.result.failure;
  const auto report = make_report(*config_, *ctx_->model, archive, outcome);
  EXPECT_GT(e_prior, 0.1);
  EXPECT_LT(report.e, 0.1 * e_prior);
  EXPECT_NEAR(outcome.theta[0], 75.0, 0.02 * 75.0);
}

TEST_F(PipelineTest, NoiselessKspaceInnovationVanishesAtTheTruth) {
  ExperimentConfig c = *config_;
  c.acquisition.snr = std::numeric_limits<double>::infinity();
  const auto archive = acquire(c, *ctx_, 0);
  EXPECT_EQ(archive.sigma, 0.0);
  const auto setup = make_innovation(c, archive);
  const kflow::roukf::FieldObserver obs(*ctx_->model, archive.series, setup.spec, archive.grid);
  const auto times = c.measurement_times();
  Eigen::VectorXd x = ctx_->model->initial_state();
  double t = 0.0;
  for (std::size_t n = 0; n < 6; ++n) {
    ctx_->model->advance(x, c.truth, t, whole_steps(t, times[n], c.model.tau));
    t = times[n];
    const auto r = obs.innovation(x, n);
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-9 * std::sqrt(static_cast<double>(archive.grid.size()))) << n;
  }
  // The fallback weights follow the assumed SNR.
  EXPECT_NEAR(setup.spec.coils[0].sigma, std::sqrt(static_cast<double>(archive.grid.size())) / 15.0, 1e-12);
}

TEST_F(PipelineTest, DegenerateSweepEqualsEstimatePlusEvaluate) {
  SweepSpec spec;
  spec.axis = SweepAxis::R;
  spec.values = {"1"};
  spec.realizations = 1;
  const auto rows = run_sweep(*config_, *ctx_, spec);
  ASSERT_EQ(rows.size(), 1u);
  const auto archive = acquire(*config_, *ctx_, 0);
  const auto report = make_report(*config_, *ctx_->model, archive, estimate(*config_, *ctx_->model, archive));
  EXPECT_EQ(rows[0].report.e, report.e);
  EXPECT_EQ(rows[0].report.theta, report.theta);
  std::ostringstream csv;
  write_sweep_csv(csv, spec.axis, config_->prior.parameters.names, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "R,realization,e,achieved_R,noise_std,U,Rd_1,var_U,var_Rd_1,diverged,wall_time,failure");
}

TEST_F(PipelineTest, SweepRejectsBadValuesBeforeRunning) {
  SweepSpec spec;
  spec.axis = SweepAxis::Mask;
  spec.values = {"spiral", "hexagonal"};
  EXPECT_THROW(run_sweep(*config_, *ctx_, spec), kflow::FormatError);
  spec.axis = SweepAxis::R;
  spec.values = {"eight"};
  EXPECT_THROW(run_sweep(*config_, *ctx_, spec), kflow::FormatError);
  EXPECT_THROW(sweep_axis_from_string("snr"), kflow::FormatError);
}

double mean_error(const ExperimentConfig& c, const ExperimentContext& ctx, SweepAxis axis, const std::string& value,
                  int realizations) {
  SweepSpec spec;
  spec.axis = axis;
  spec.values = {value};
  spec.realizations = realizations;
  double sum = 0.0;
  for (const auto& r : run_sweep(c, ctx, spec)) {
    EXPECT_FALSE(r.report.diverged) << r.report.failure;
    sum += r.report.e;
  }
  return sum / realizations;
}

TEST_F(PipelineTest, LargerVencGivesLargerError) {
  const double tight = mean_error(*config_, *ctx_, SweepAxis::VencFraction, "1.2", 3);
  const double loose = mean_error(*config_, *ctx_, SweepAxis::VencFraction, "6", 3);
  EXPECT_LT(tight, loose);
}

TEST_F(PipelineTest, ConstantMagnitudeIsWorseThanTrueMagnitude) {
  ExperimentConfig c = *config_;
  c.mask.pattern = kflow::imaging::MaskPattern::GaussianRandom;
  c.mask.R = 8.0;
  const double exact = mean_error(c, *ctx_, SweepAxis::MagnitudeSource, "true", 2);
  const double constant = mean_error(c, *ctx_, SweepAxis::MagnitudeSource, "constant", 2);
  EXPECT_LT(exact, constant);
}

TEST_F(PipelineTest, CommandsWriteTheirArtifacts) {
  const auto out = scratch("commands");
  ExperimentConfig c = *config_;
  const auto dirs = cmd_generate(c, out / "gen");
  ASSERT_EQ(dirs.size(), 1u);
  EXPECT_TRUE(fs::exists(out / "gen" / "run.json"));
  const auto o = cmd_estimate(c, dirs[0], out / "est");
  for (const char* f : {"trajectory.csv", "estimate.json", "filter_state.json", "filter_state_x.kfe",
                        "filter_state_LX.kfe"})
    EXPECT_TRUE(fs::exists(out / "est" / f)) << f;
  const auto theta = read_estimate(out / "est" / "estimate.json", c.prior.parameters.names);
  EXPECT_EQ(theta, o.theta);
  const auto r = cmd_evaluate(c, dirs[0], theta, out / "eval");
  EXPECT_TRUE(fs::exists(out / "eval" / "report.json"));
  EXPECT_LT(r.e, 0.05);
  // A series generated for another grid is refused.
  ExperimentConfig other = c;
  other.acquisition.dims = std::array<std::size_t, 3>{16, 8, 20};
  EXPECT_THROW(cmd_estimate(other, dirs[0], out / "est2"), kflow::FormatError);
}

TEST(MaskCommand, ReportAndFiles) {
  const auto out = scratch("mask");
  MaskSpec spec;
  spec.pattern = kflow::imaging::MaskPattern::GaussianRandom;
  spec.R = 8.0;
  const auto r = cmd_mask(kflow::imaging::VoxelGrid({64, 64, 1}), spec, out);
  EXPECT_EQ(r.selected, 512u);
  EXPECT_DOUBLE_EQ(r.achieved_R, 8.0);
  EXPECT_LT(r.mean_selected_radius, r.uniform_mean_radius);
  EXPECT_EQ(kflow::io::load_mask((out / "mask.kfe").string()).count(), 512u);
  EXPECT_EQ(slurp(out / "mask.pgm").substr(0, 2), "P5");
  const json j = json::parse(slurp(out / "mask.json"));
  EXPECT_EQ(j.at("pattern"), "gaussian");
}

}  // namespace
