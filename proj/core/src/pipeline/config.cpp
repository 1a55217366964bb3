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

#include "kflow/pipeline/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kflow/error.hpp"
#include "kflow/pipeline/model_binding.hpp"

namespace kflow::pipeline {

using nlohmann::json;

namespace {

// Rejects keys outside `allowed` so a misspelled option is not silently ignored.
void check_keys(const json& obj, std::string_view where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw FormatError("config: '" + std::string(where) + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw FormatError("config: unknown key '" + std::string(where) + "." + key + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out, std::string_view where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError("config: bad value for '" + std::string(where) + "." + key + "'");
  }
}

double read_number_or_inf(const json& v, std::string_view what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
    return std::numeric_limits<double>::infinity();
  throw FormatError("config: '" + std::string(what) + "' must be a number or \"inf\"");
}

Vec3 read_vec3(const json& v, std::string_view what) {
  if (!v.is_array() || v.size() != 3) throw FormatError("config: '" + std::string(what) + "' must be [x, y, z]");
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

forward::InflowProfile parse_inflow(const json& j) {
  check_keys(j, "truth.inflow", {"kind", "U", "T", "Tc", "kappa", "beta", "spatial"});
  forward::InflowProfile p;
  std::string kind = "aortic", spatial = "plug";
  read(j, "kind", kind, "truth.inflow");
  read(j, "spatial", spatial, "truth.inflow");
  p.kind = forward::pulse_kind_from_string(kind);
  p.spatial = forward::inflow_spatial_from_string(spatial);
  read(j, "U", p.U, "truth.inflow");
  read(j, "T", p.T, "truth.inflow");
  read(j, "Tc", p.Tc, "truth.inflow");
  read(j, "kappa", p.kappa, "truth.inflow");
  read(j, "beta", p.beta, "truth.inflow");
  return p;
}

forward::WindkesselParams parse_outlet(const json& j) {
  check_keys(j, "truth.outlets[]", {"Rp", "Rd", "C"});
  forward::WindkesselParams w;
  read(j, "Rp", w.Rp, "truth.outlets[]");
  if (j.contains("Rd")) w.Rd = j.at("Rd").get<double>();
  if (j.contains("C")) w.C = j.at("C").get<double>();
  return w;
}

roukf::ParameterSet parse_prior(const json& j) {
  check_keys(j, "prior", {"reparam", "parameters"});
  roukf::ParameterSet ps;
  std::string reparam = "exponential";
  read(j, "reparam", reparam, "prior");
  ps.reparam = roukf::reparam_from_string(reparam);
  if (!j.contains("parameters") || !j.at("parameters").is_array() || j.at("parameters").empty())
    throw FormatError("config: 'prior.parameters' must be a non-empty array");
  const auto& arr = j.at("parameters");
  const auto p = static_cast<Eigen::Index>(arr.size());
  ps.theta0.resize(p);
  ps.P0 = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto& e = arr[static_cast<std::size_t>(i)];
    check_keys(e, "prior.parameters[]", {"name", "value", "std"});
    if (!e.contains("name") || !e.contains("value"))
      throw FormatError("config: each prior parameter needs 'name' and 'value'");
    ps.names.push_back(e.at("name").get<std::string>());
    ps.theta0[i] = e.at("value").get<double>();
    double sd = 0.5;
    read(e, "std", sd, "prior.parameters[]");
    ps.P0(i, i) = sd * sd;
  }
  return ps;
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

ModelKind model_kind_from_string(std::string_view s) {
  if (s == "surrogate") return ModelKind::Surrogate;
  if (s == "navier_stokes" || s == "fem") return ModelKind::NavierStokes;
  throw FormatError("config: unknown model kind '" + std::string(s) + "'");
}

MagnitudeSource magnitude_source_from_string(std::string_view s) {
  if (s == "true") return MagnitudeSource::True;
  if (s == "zero_filled_r2") return MagnitudeSource::ZeroFilledR2;
  if (s == "constant") return MagnitudeSource::Constant;
  throw FormatError("config: unknown magnitude source '" + std::string(s) + "'");
}

const char* to_string(ModelKind k) {
  return k == ModelKind::Surrogate ? "surrogate" : "navier_stokes";
}

const char* to_string(MagnitudeSource s) {
  switch (s) {
    case MagnitudeSource::True: return "true";
    case MagnitudeSource::ZeroFilledR2: return "zero_filled_r2";
    case MagnitudeSource::Constant: return "constant";
  }
  return "true";
}

const char* to_string(NoiseStdSource s) { return s == NoiseStdSource::True ? "true" : "estimated"; }

double ExperimentConfig::measurement_duration() const {
  return acquisition.duration.value_or(truth.inflow.Tc);
}

std::vector<double> ExperimentConfig::measurement_times() const {
  const long steps_per_meas = std::lround(acquisition.dt_meas / model.tau);
  // Counting in whole steps keeps every instant an exact multiple of tau.
  const double n = std::floor(measurement_duration() / acquisition.dt_meas + 1e-9);
  std::vector<double> t;
  for (long i = 1; i <= static_cast<long>(n); ++i)
    t.push_back(static_cast<double>(i * steps_per_meas) * model.tau);
  return t;
}

std::filesystem::path ExperimentConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw FormatError("config: " + what); };
  try {
    truth.inflow.validate();
    for (const auto& o : truth.outlets) o.validate();
    prior.parameters.validate();
    model.fluid.validate();
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
  if (truth.outlets.empty()) fail("'truth.outlets' must not be empty");
  if (model.kind == ModelKind::NavierStokes && model.mesh.empty()) fail("'model.mesh' is required for navier_stokes");
  if (model.kind == ModelKind::Surrogate &&
      truth.outlets.size() != model.surrogate.branches.size())
    fail("surrogate branch count must match 'truth.outlets'");
  if (!(model.tau > 0.0)) fail("'model.tau' must be > 0");
  const auto& a = acquisition;
  if (!(a.spacing > 0.0)) fail("'acquisition.spacing' must be > 0");
  if (!(a.dt_meas > 0.0)) fail("'acquisition.dt_meas' must be > 0");
  const double ratio = a.dt_meas / model.tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
    fail("'acquisition.dt_meas' must be an integer multiple of 'model.tau'");
  if (a.duration && !(*a.duration >= a.dt_meas)) fail("'acquisition.duration' must be >= dt_meas");
  if (!(a.venc > 0.0)) fail("'acquisition.venc.value' must be > 0");
  if (!(a.snr > 0.0)) fail("'acquisition.snr' must be > 0");
  if (a.directions.empty()) fail("'acquisition.directions' must not be empty");
  for (const auto& d : a.directions)
    if (std::abs(d.norm() - 1.0) > 1e-9) fail("'acquisition.directions' must be unit vectors");
  if (a.coils < 1) fail("'acquisition.coils' must be >= 1");
  if (a.coils > 1 && filter.innovation != roukf::InnovationKind::KSpace)
    fail("several coils are only supported with the kspace innovation");
  if (!(a.lumen_magnitude > 0.0) || !(a.background_magnitude >= 0.0))
    fail("magnitudes must be positive");
  if (!(mask.R >= 1.0)) fail("'mask.R' must be >= 1");
  if (mask.pattern == imaging::MaskPattern::Composed) fail("'mask.pattern' cannot be 'composed'");
  if (!(mask.sigma_frac > 0.0)) fail("'mask.sigma_frac' must be > 0");
  if (mask.turns < 1) fail("'mask.turns' must be >= 1");
  if (filter.threads < 0) fail("'filter.threads' must be >= 0");
  if (!(filter.assumed_snr > 0.0) || std::isinf(filter.assumed_snr))
    fail("'filter.assumed_snr' must be positive and finite");
  if (realizations < 1) fail("'realizations' must be >= 1");
  const auto& names = prior.parameters.names;
  if (names.size() != static_cast<std::size_t>(prior.parameters.size()))
    fail("every prior parameter needs a name");
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    fail("prior parameter names must be unique");
  try {
    std::vector<ParameterTarget> targets;
    for (const auto& n : names) targets.push_back(parse_parameter_name(n, static_cast<int>(truth.outlets.size())));
    apply_parameters(truth, targets, prior.parameters.theta0);
  } catch (const InvalidArgument& e) {
    fail(std::string("'prior.parameters': ") + e.what());
  }
  if (measurement_times().empty()) fail("no measurement instant fits in the duration");
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  check_keys(root, "", {"model", "truth", "prior", "acquisition", "mask", "filter", "seed",
                        "realizations", "output"});
  ExperimentConfig c;
  c.base_dir = base_dir;

  try {
    if (root.contains("model")) {
      const auto& m = root.at("model");
      check_keys(m, "model", {"kind", "mesh", "tau", "fluid", "solver", "surrogate"});
      std::string kind = "surrogate";
      read(m, "kind", kind, "model");
      c.model.kind = model_kind_from_string(kind);
      read(m, "mesh", c.model.mesh, "model");
      read(m, "tau", c.model.tau, "model");
      if (m.contains("fluid")) {
        check_keys(m.at("fluid"), "model.fluid", {"rho", "mu"});
        read(m.at("fluid"), "rho", c.model.fluid.rho, "model.fluid");
        read(m.at("fluid"), "mu", c.model.fluid.mu, "model.fluid");
      }
      if (m.contains("solver")) {
        const auto& s = m.at("solver");
        check_keys(s, "model.solver", {"delta", "epsilon", "tolerance", "max_iterations"});
        read(s, "delta", c.model.solver.delta, "model.solver");
        read(s, "epsilon", c.model.solver.epsilon, "model.solver");
        read(s, "tolerance", c.model.solver.tolerance, "model.solver");
        read(s, "max_iterations", c.model.solver.max_iterations, "model.solver");
      }
      if (m.contains("surrogate")) {
        const auto& s = m.at("surrogate");
        check_keys(s, "model.surrogate", {"trunk_radius", "trunk_length", "branch_length", "branches",
                                          "sample_spacing"});
        auto& g = c.model.surrogate;
        read(s, "trunk_radius", g.trunk_radius, "model.surrogate");
        read(s, "trunk_length", g.trunk_length, "model.surrogate");
        read(s, "branch_length", g.branch_length, "model.surrogate");
        read(s, "sample_spacing", g.sample_spacing, "model.surrogate");
        if (s.contains("branches")) {
          g.branches.clear();
          for (const auto& b : s.at("branches")) {
            check_keys(b, "model.surrogate.branches[]", {"x_offset", "radius"});
            forward::SurrogateBranch br;
            read(b, "x_offset", br.x_offset, "model.surrogate.branches[]");
            read(b, "radius", br.radius, "model.surrogate.branches[]");
            g.branches.push_back(br);
          }
        }
      }
    }
    c.model.solver.tau = c.model.tau;

    if (!root.contains("truth")) throw FormatError("config: 'truth' is required");
    const auto& t = root.at("truth");
    check_keys(t, "truth", {"inflow", "outlets"});
    if (t.contains("inflow")) c.truth.inflow = parse_inflow(t.at("inflow"));
    if (t.contains("outlets"))
      for (const auto& o : t.at("outlets")) c.truth.outlets.push_back(parse_outlet(o));

    if (!root.contains("prior")) throw FormatError("config: 'prior' is required");
    c.prior.parameters = parse_prior(root.at("prior"));

    if (root.contains("acquisition")) {
      const auto& a = root.at("acquisition");
      check_keys(a, "acquisition", {"spacing", "padding", "dims", "venc", "snr", "dt_meas", "duration",
                                    "directions", "coils", "lumen_magnitude", "background_magnitude",
                                    "phi_back", "magnitude_source", "noise_std"});
      auto& q = c.acquisition;
      read(a, "spacing", q.spacing, "acquisition");
      read(a, "padding", q.padding, "acquisition");
      if (a.contains("dims")) q.dims = a.at("dims").get<std::array<std::size_t, 3>>();
      if (a.contains("venc")) {
        const auto& v = a.at("venc");
        check_keys(v, "acquisition.venc", {"policy", "value"});
        std::string policy = "fraction";
        read(v, "policy", policy, "acquisition.venc");
        if (policy == "fraction") q.venc_policy = VencPolicy::Fraction;
        else if (policy == "absolute") q.venc_policy = VencPolicy::Absolute;
        else throw FormatError("config: 'acquisition.venc.policy' must be 'fraction' or 'absolute'");
        read(v, "value", q.venc, "acquisition.venc");
      }
      if (a.contains("snr")) q.snr = read_number_or_inf(a.at("snr"), "acquisition.snr");
      read(a, "dt_meas", q.dt_meas, "acquisition");
      if (a.contains("duration")) q.duration = a.at("duration").get<double>();
      if (a.contains("directions")) {
        q.directions.clear();
        for (const auto& d : a.at("directions")) q.directions.push_back(read_vec3(d, "acquisition.directions"));
      }
      read(a, "coils", q.coils, "acquisition");
      read(a, "lumen_magnitude", q.lumen_magnitude, "acquisition");
      read(a, "background_magnitude", q.background_magnitude, "acquisition");
      read(a, "phi_back", q.phi_back, "acquisition");
      if (a.contains("magnitude_source"))
        q.magnitude_source = magnitude_source_from_string(a.at("magnitude_source").get<std::string>());
      if (a.contains("noise_std")) {
        const auto s = a.at("noise_std").get<std::string>();
        if (s == "true") q.noise_std = NoiseStdSource::True;
        else if (s == "estimated") q.noise_std = NoiseStdSource::Estimated;
        else throw FormatError("config: 'acquisition.noise_std' must be 'true' or 'estimated'");
      }
    }

    if (root.contains("mask")) {
      const auto& m = root.at("mask");
      check_keys(m, "mask", {"pattern", "R", "seed", "sigma_frac", "turns"});
      std::string pattern = "full";
      read(m, "pattern", pattern, "mask");
      c.mask.pattern = imaging::mask_pattern_from_string(pattern);
      read(m, "R", c.mask.R, "mask");
      read(m, "seed", c.mask.seed, "mask");
      read(m, "sigma_frac", c.mask.sigma_frac, "mask");
      read(m, "turns", c.mask.turns, "mask");
    }

    if (root.contains("filter")) {
      const auto& f = root.at("filter");
      check_keys(f, "filter", {"innovation", "skip_first", "threads", "assumed_snr"});
      std::string kind = "kspace";
      read(f, "innovation", kind, "filter");
      c.filter.innovation = roukf::innovation_kind_from_string(kind);
      read(f, "skip_first", c.filter.skip_first, "filter");
      read(f, "threads", c.filter.threads, "filter");
      read(f, "assumed_snr", c.filter.assumed_snr, "filter");
    }

    read(root, "seed", c.seed, "");
    read(root, "realizations", c.realizations, "");
    read(root, "output", c.output, "");
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"kind", to_string(c.model.kind)},
                {"mesh", c.model.mesh},
                {"tau", c.model.tau},
                {"fluid", {{"rho", c.model.fluid.rho}, {"mu", c.model.fluid.mu}}},
                {"solver",
                 {{"delta", c.model.solver.delta},
                  {"epsilon", c.model.solver.epsilon},
                  {"tolerance", c.model.solver.tolerance},
                  {"max_iterations", c.model.solver.max_iterations}}}};
  json branches = json::array();
  for (const auto& b : c.model.surrogate.branches)
    branches.push_back({{"x_offset", b.x_offset}, {"radius", b.radius}});
  j["model"]["surrogate"] = {{"trunk_radius", c.model.surrogate.trunk_radius},
                             {"trunk_length", c.model.surrogate.trunk_length},
                             {"branch_length", c.model.surrogate.branch_length},
                             {"branches", branches},
                             {"sample_spacing", c.model.surrogate.sample_spacing}};

  const auto& in = c.truth.inflow;
  const char* kind = in.kind == forward::PulseKind::Aortic    ? "aortic"
                     : in.kind == forward::PulseKind::Phantom ? "phantom"
                                                              : "constant";
  json outlets = json::array();
  for (const auto& o : c.truth.outlets) {
    json oj = {{"Rp", o.Rp}};
    if (o.Rd) oj["Rd"] = *o.Rd;
    if (o.C) oj["C"] = *o.C;
    outlets.push_back(oj);
  }
  j["truth"] = {{"inflow",
                 {{"kind", kind},
                  {"U", in.U},
                  {"T", in.T},
                  {"Tc", in.Tc},
                  {"kappa", in.kappa},
                  {"beta", in.beta},
                  {"spatial", in.spatial == forward::InflowSpatial::PlugNormal ? "plug" : "stokes"}}},
                {"outlets", outlets}};

  json params = json::array();
  const auto& ps = c.prior.parameters;
  for (int i = 0; i < ps.size(); ++i)
    params.push_back({{"name", ps.names[static_cast<std::size_t>(i)]},
                      {"value", ps.theta0[i]},
                      {"std", std::sqrt(ps.P0(i, i))}});
  j["prior"] = {{"reparam", roukf::to_string(ps.reparam)}, {"parameters", params}};

  const auto& a = c.acquisition;
  json dirs = json::array();
  for (const auto& d : a.directions) dirs.push_back(vec3_json(d));
  j["acquisition"] = {{"spacing", a.spacing},
                      {"padding", a.padding},
                      {"venc",
                       {{"policy", a.venc_policy == VencPolicy::Fraction ? "fraction" : "absolute"},
                        {"value", a.venc}}},
                      {"snr", number_or_inf(a.snr)},
                      {"dt_meas", a.dt_meas},
                      {"duration", c.measurement_duration()},
                      {"directions", dirs},
                      {"coils", a.coils},
                      {"lumen_magnitude", a.lumen_magnitude},
                      {"background_magnitude", a.background_magnitude},
                      {"phi_back", a.phi_back},
                      {"magnitude_source", to_string(a.magnitude_source)},
                      {"noise_std", to_string(a.noise_std)}};
  if (a.dims) j["acquisition"]["dims"] = *a.dims;

  j["mask"] = {{"pattern", std::string(imaging::to_string(c.mask.pattern))},
               {"R", c.mask.R},
               {"seed", c.mask.seed},
               {"sigma_frac", c.mask.sigma_frac},
               {"turns", c.mask.turns}};
  j["filter"] = {{"innovation", roukf::to_string(c.filter.innovation)},
                 {"skip_first", c.filter.skip_first},
                 {"threads", c.filter.threads},
                 {"assumed_snr", c.filter.assumed_snr}};
  j["seed"] = c.seed;
  j["realizations"] = c.realizations;
  j["output"] = c.output;
  return j.dump(2);
}

}  // namespace kflow::pipeline
