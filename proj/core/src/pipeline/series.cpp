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

#include "kflow/pipeline/series.hpp"

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

std::string frame_name(std::size_t n, std::size_t d) {
  std::ostringstream s;
  s << "frame_" << std::setw(4) << std::setfill('0') << n << "_d" << d << ".kfe";
  return s.str();
}

std::string frame_name(std::size_t n, std::size_t d, std::size_t c) {
  std::ostringstream s;
  s << "frame_" << std::setw(4) << std::setfill('0') << n << "_d" << d << "_c" << c << ".kfe";
  return s.str();
}

template <typename T>
json save_entry(const fs::path& dir, const std::string& name, const T& value) {
  const fs::path p = dir / name;
  io::save(p.string(), value);
  return {{"file", name}, {"sha256", io::sha256_file(p.string())}};
}

// Resolves a manifest entry to a path after checking its digest.
fs::path verified(const fs::path& dir, const json& entry) {
  if (!entry.contains("file") || !entry.contains("sha256"))
    throw FormatError("series: malformed manifest entry");
  const std::string name = entry.at("file").get<std::string>();
  if (name.find('/') != std::string::npos || name.find("..") != std::string::npos)
    throw FormatError("series: manifest names a file outside the series directory");
  const fs::path p = dir / name;
  if (!fs::exists(p)) throw FormatError("series: missing file " + name);
  if (io::sha256_file(p.string()) != entry.at("sha256").get<std::string>())
    throw FormatError("series: digest mismatch for " + name);
  return p;
}

json grid_json(const imaging::VoxelGrid& g) {
  return {{"dims", g.dims},
          {"spacing", {g.spacing.x(), g.spacing.y(), g.spacing.z()}},
          {"origin", {g.origin.x(), g.origin.y(), g.origin.z()}}};
}

imaging::VoxelGrid grid_from_json(const json& j) {
  imaging::VoxelGrid g;
  g.dims = j.at("dims").get<std::array<std::size_t, 3>>();
  const auto h = j.at("spacing").get<std::array<double, 3>>();
  const auto o = j.at("origin").get<std::array<double, 3>>();
  g.spacing = {h[0], h[1], h[2]};
  g.origin = {o[0], o[1], o[2]};
  return g;
}

}  // namespace

void write_series(const fs::path& dir, const SeriesArchive& a) {
  a.series.validate();
  const bool kspace = a.series.is_kspace();
  fs::create_directories(dir);

  json m;
  m["format"] = kSeriesFormat;
  m["kind"] = kspace ? "kspace" : "velocity";
  m["grid"] = grid_json(a.grid);
  m["venc"] = a.venc;
  m["sigma"] = a.sigma;
  m["velocity_sigma"] = a.velocity_sigma;
  m["coils"] = a.coils;
  m["seed"] = a.seed;
  m["realization"] = a.realization;
  json dirs = json::array();
  for (const auto& d : a.series.directions) dirs.push_back({d.x(), d.y(), d.z()});
  m["directions"] = dirs;
  const auto times = a.series.times();
  m["times"] = times;
  m["measurement_count"] = times.size();
  m["count_convention"] = "floor(duration / dt_meas), instants n dt_meas for n >= 1";

  json masks = json::array();
  for (std::size_t i = 0; i < a.series.masks.size(); ++i) {
    json e = save_entry(dir, "mask_" + std::to_string(i) + ".kfe", a.series.masks[i]);
    e["pattern"] = std::string(imaging::to_string(a.series.masks[i].pattern));
    e["target_R"] = a.series.masks[i].target_R;
    e["achieved_R"] = a.series.masks[i].achieved_R();
    masks.push_back(e);
  }
  m["masks"] = masks;

  json frames = json::array();
  for (std::size_t n = 0; n < a.series.frames.size(); ++n) {
    const auto& f = a.series.frames[n];
    json files = json::array();
    for (std::size_t d = 0; d < a.series.directions.size(); ++d) {
      if (kspace) {
        for (std::size_t c = 0; c < f.kspace[d].size(); ++c)
          files.push_back(save_entry(dir, frame_name(n, d, c), f.kspace[d][c]));
      } else {
        files.push_back(save_entry(dir, frame_name(n, d), f.velocity[d]));
      }
    }
    frames.push_back({{"time", f.time}, {"mask_index", f.mask_index}, {"files", files}});
  }
  m["frames"] = frames;

  json aux;
  json mags = json::array();
  for (std::size_t c = 0; c < a.magnitude_true.size(); ++c)
    mags.push_back(save_entry(dir, "magnitude_c" + std::to_string(c) + ".kfe", a.magnitude_true[c]));
  aux["magnitude"] = mags;
  json zf = json::array();
  for (std::size_t c = 0; c < a.magnitude_zf_r2.size(); ++c)
    zf.push_back(save_entry(dir, "magnitude_zf_r2_c" + std::to_string(c) + ".kfe", a.magnitude_zf_r2[c]));
  aux["magnitude_zf_r2"] = zf;
  aux["phi_back"] = save_entry(dir, "phi_back.kfe", a.phi_back);
  json cal = json::array();
  for (std::size_t d = 0; d < a.calibration.size(); ++d) {
    json per_coil = json::array();
    for (std::size_t c = 0; c < a.calibration[d].size(); ++c)
      per_coil.push_back(save_entry(
          dir, "calibration_d" + std::to_string(d) + "_c" + std::to_string(c) + ".kfe", a.calibration[d][c]));
    cal.push_back(per_coil);
  }
  aux["calibration"] = cal;

  if (!a.reference.empty()) {
    const auto samples = static_cast<std::size_t>(a.reference.front().size());
    imaging::ScalarField ref(imaging::VoxelGrid({samples, a.reference.size(), 1}));
    for (std::size_t n = 0; n < a.reference.size(); ++n) {
      if (static_cast<std::size_t>(a.reference[n].size()) != samples)
        throw InvalidArgument("write_series: reference samples differ in size");
      for (std::size_t s = 0; s < samples; ++s) ref.at(s, n, 0) = a.reference[n][static_cast<Eigen::Index>(s)];
    }
    aux["reference"] = save_entry(dir, "reference.kfe", ref);
  }
  m["aux"] = aux;
  m["config"] = a.config_json.empty() ? json::object() : json::parse(a.config_json);

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw FormatError("series: cannot write manifest in " + dir.string());
}

SeriesArchive read_series(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw FormatError("series: no manifest.json in " + dir.string());
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string("series: bad manifest: ") + e.what());
  }

  SeriesArchive a;
  try {
    if (m.at("format").get<std::string>() != kSeriesFormat) throw FormatError("series: unknown format");
    const bool kspace = m.at("kind").get<std::string>() == "kspace";
    a.grid = grid_from_json(m.at("grid"));
    a.venc = m.at("venc").get<double>();
    a.sigma = m.at("sigma").get<double>();
    a.velocity_sigma = m.at("velocity_sigma").get<double>();
    a.coils = m.at("coils").get<int>();
    a.seed = m.at("seed").get<std::uint64_t>();
    a.realization = m.at("realization").get<int>();
    for (const auto& d : m.at("directions")) a.series.directions.emplace_back(d[0], d[1], d[2]);
    for (const auto& e : m.at("masks")) a.series.masks.push_back(io::load_mask(verified(dir, e).string()));

    const auto& frames = m.at("frames");
    if (frames.size() != m.at("measurement_count").get<std::size_t>())
      throw FormatError("series: frame count does not match measurement_count");
    const std::size_t D = a.series.directions.size();
    for (const auto& fj : frames) {
      roukf::MeasurementFrame f;
      f.time = fj.at("time").get<double>();
      f.mask_index = fj.at("mask_index").get<std::vector<std::size_t>>();
      const auto& files = fj.at("files");
      if (kspace) {
        const std::size_t C = static_cast<std::size_t>(a.coils);
        if (files.size() != D * C) throw FormatError("series: frame has the wrong number of files");
        f.kspace.resize(D);
        for (std::size_t d = 0; d < D; ++d)
          for (std::size_t c = 0; c < C; ++c)
            f.kspace[d].push_back(io::load_complex_field(verified(dir, files[d * C + c]).string()));
      } else {
        if (files.size() != D) throw FormatError("series: frame has the wrong number of files");
        for (std::size_t d = 0; d < D; ++d)
          f.velocity.push_back(io::load_scalar_field(verified(dir, files[d]).string()));
      }
      a.series.frames.push_back(std::move(f));
    }

    const auto& aux = m.at("aux");
    for (const auto& e : aux.at("magnitude")) a.magnitude_true.push_back(io::load_scalar_field(verified(dir, e).string()));
    for (const auto& e : aux.at("magnitude_zf_r2"))
      a.magnitude_zf_r2.push_back(io::load_scalar_field(verified(dir, e).string()));
    a.phi_back = io::load_scalar_field(verified(dir, aux.at("phi_back")).string());
    for (const auto& per_coil : aux.at("calibration")) {
      std::vector<ComplexField> row;
      for (const auto& e : per_coil) row.push_back(io::load_complex_field(verified(dir, e).string()));
      a.calibration.push_back(std::move(row));
    }
    if (aux.contains("reference")) {
      const auto ref = io::load_scalar_field(verified(dir, aux.at("reference")).string());
      for (std::size_t n = 0; n < ref.grid.dims[1]; ++n) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(ref.grid.dims[0]));
        for (std::size_t s = 0; s < ref.grid.dims[0]; ++s) v[static_cast<Eigen::Index>(s)] = ref.at(s, n, 0);
        a.reference.push_back(std::move(v));
      }
    }
    a.config_json = m.at("config").dump(2);
  } catch (const json::exception& e) {
    throw FormatError(std::string("series: bad manifest: ") + e.what());
  }
  try {
    a.series.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("series: ") + e.what());
  }
  return a;
}

}  // namespace kflow::pipeline
