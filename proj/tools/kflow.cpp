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

// kflow: synthetic 4D-flow twin experiments from the command line.
//
//   kflow generate --config exp.json [--seed N] [--out DIR]
//   kflow estimate --config exp.json --series DIR [--out DIR] [--threads N]
//   kflow evaluate --config exp.json --series DIR (--estimate FILE | --truth | --prior) [--out DIR]
//   kflow mask     --dims 64,64,1 --pattern spiral --R 8 [--seed N] [--out DIR]
//   kflow sweep    --config exp.json --axis R --values 1,8,16,32 [--realizations N] [--threads N]
//
// Exit codes: 0 ok, 2 filter diverged, 3 configuration or data error,
// 1 anything else.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kflow/error.hpp"
#include "kflow/pipeline/commands.hpp"
#include "kflow/pipeline/model_binding.hpp"

namespace kp = kflow::pipeline;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", c.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  if (needs_config) opt->required();
  cmd->add_option("--seed", c.seed, "base noise seed, overrides the config");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

kp::ExperimentConfig load(const Common& c) {
  auto cfg = kp::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.threads) cfg.filter.threads = *c.threads;
  return cfg;
}

std::filesystem::path out_dir(const Common& c, const kp::ExperimentConfig& cfg, const char* leaf) {
  if (!c.out.empty()) return c.out;
  return cfg.resolve(cfg.output) / leaf;
}

void print_estimate(const kp::ExperimentConfig& cfg, const kp::EstimateOutcome& o) {
  const auto& names = cfg.prior.parameters.names;
  for (std::size_t i = 0; i < names.size(); ++i)
    std::cout << names[i] << " = " << o.theta[static_cast<Eigen::Index>(i)]
              << "  (var " << o.variance[static_cast<Eigen::Index>(i)] << ")\n";
  if (o.result.diverged) std::cerr << "kflow: filter diverged: " << o.result.failure << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter estimation twin experiments from undersampled k-space data"};
  app.require_subcommand(1);

  Common gen, est, eva, swp;
  auto* generate = app.add_subcommand("generate", "forward run and synthetic acquisition");
  add_common(generate, gen);

  auto* estimate = app.add_subcommand("estimate", "filter run over a measurement series");
  add_common(estimate, est);
  std::string est_series;
  estimate->add_option("--series", est_series, "series directory")->required()->check(CLI::ExistingDirectory);

  auto* evaluate = app.add_subcommand("evaluate", "flow error of a parameter set");
  add_common(evaluate, eva);
  std::string eva_series, eva_estimate;
  bool eva_truth = false, eva_prior = false;
  evaluate->add_option("--series", eva_series, "series directory")->required()->check(CLI::ExistingDirectory);
  auto* src = evaluate->add_option("--estimate", eva_estimate, "estimate.json from 'estimate'");
  evaluate->add_flag("--truth", eva_truth, "evaluate the true parameters")->excludes(src);
  evaluate->add_flag("--prior", eva_prior, "evaluate the prior guess")->excludes(src);

  auto* mask = app.add_subcommand("mask", "build and render a sampling mask");
  Common msk;
  add_common(mask, msk, false);
  std::vector<std::size_t> dims{64, 64, 1};
  std::string pattern = "spiral";
  double R = 8.0, sigma_frac = kflow::imaging::kDefaultGaussianSigmaFrac;
  int turns = 6;
  mask->add_option("--dims", dims, "grid dimensions nx,ny,nz")->delimiter(',')->expected(3);
  mask->add_option("--pattern", pattern, "full | spiral | gaussian");
  mask->add_option("--R", R, "target acceleration");
  mask->add_option("--sigma-frac", sigma_frac, "gaussian width as a fraction of the smaller in-plane size");
  mask->add_option("--turns", turns, "spiral turns");

  auto* sweep = app.add_subcommand("sweep", "estimation and evaluation over one axis");
  add_common(sweep, swp);
  std::string axis = "R";
  std::vector<std::string> values;
  int realizations = 0;
  sweep->add_option("--axis", axis, "R | venc_fraction | mask | magnitude_source | innovation");
  sweep->add_option("--values", values, "comma separated axis values")->delimiter(',')->required();
  sweep->add_option("--realizations", realizations, "noise realizations per value (default: config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kp::kExitOk : kp::kExitConfig;
  }

  try {
    if (*generate) {
      const auto cfg = load(gen);
      const auto dirs = kp::cmd_generate(cfg, out_dir(gen, cfg, "generate"));
      for (const auto& d : dirs) std::cout << d.string() << '\n';
      return kp::kExitOk;
    }
    if (*estimate) {
      const auto cfg = load(est);
      const auto o = kp::cmd_estimate(cfg, est_series, out_dir(est, cfg, "estimate"));
      print_estimate(cfg, o);
      return o.result.diverged ? kp::kExitDiverged : kp::kExitOk;
    }
    if (*evaluate) {
      const auto cfg = load(eva);
      const auto& names = cfg.prior.parameters.names;
      Eigen::VectorXd theta;
      if (eva_truth) {
        std::vector<kp::ParameterTarget> targets;
        for (const auto& n : names)
          targets.push_back(kp::parse_parameter_name(n, static_cast<int>(cfg.truth.outlets.size())));
        theta = kp::extract_parameters(cfg.truth, targets);
      } else if (eva_prior) {
        theta = cfg.prior.parameters.theta0;
      } else if (!eva_estimate.empty()) {
        theta = kp::read_estimate(eva_estimate, names);
      } else {
        std::cerr << "kflow: evaluate needs --estimate, --truth or --prior\n";
        return kp::kExitConfig;
      }
      const auto r = kp::cmd_evaluate(cfg, eva_series, theta, out_dir(eva, cfg, "evaluate"));
      std::cout << kp::report_to_json(r) << '\n';
      return kp::kExitOk;
    }
    if (*mask) {
      kp::MaskSpec spec;
      spec.pattern = kflow::imaging::mask_pattern_from_string(pattern);
      spec.R = R;
      spec.sigma_frac = sigma_frac;
      spec.turns = turns;
      if (msk.seed) spec.seed = *msk.seed;
      kflow::imaging::VoxelGrid grid({dims[0], dims[1], dims[2]});
      std::filesystem::path out = msk.out.empty() ? std::filesystem::path("mask") : std::filesystem::path(msk.out);
      if (!msk.config.empty()) {
        const auto cfg = load(msk);
        const auto model = kp::build_model(cfg);
        grid = kp::build_grid(cfg, *model);
        if (msk.out.empty()) out = cfg.resolve(cfg.output) / "mask";
      }
      const auto r = kp::cmd_mask(grid, spec, out);
      std::cout << "achieved R " << r.achieved_R << " (target " << r.target_R << "), " << r.in_plane_selected
                << " in-plane points, mean radius " << r.mean_selected_radius << " vs uniform "
                << r.uniform_mean_radius << '\n';
      return kp::kExitOk;
    }
    if (*sweep) {
      const auto cfg = load(swp);
      kp::SweepSpec spec;
      spec.axis = kp::sweep_axis_from_string(axis);
      spec.values = values;
      spec.realizations = realizations > 0 ? realizations : cfg.realizations;
      spec.threads = swp.threads.value_or(1);
      const auto rows = kp::cmd_sweep(cfg, spec, out_dir(swp, cfg, "sweep"));
      bool any_failed = false;
      for (const auto& r : rows) any_failed = any_failed || r.report.diverged;
      std::cout << rows.size() << " runs" << (any_failed ? ", some diverged" : "") << '\n';
      return kp::kExitOk;
    }
  } catch (const kflow::DivergenceError& e) {
    std::cerr << "kflow: " << e.what() << '\n';
    return kp::kExitDiverged;
  } catch (const kflow::FormatError& e) {
    std::cerr << "kflow: " << e.what() << '\n';
    return kp::kExitConfig;
  } catch (const kflow::InvalidArgument& e) {
    std::cerr << "kflow: " << e.what() << '\n';
    return kp::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "kflow: " << e.what() << '\n';
    return 1;
  }
  return kp::kExitOk;
}
