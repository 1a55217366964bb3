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

#include "kflow/imaging/sampling_mask.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "kflow/error.hpp"

namespace kflow::imaging {
namespace {

constexpr double kRTolerance = 0.10;

void replicate_along_z(SamplingMask& mask, const std::vector<std::uint8_t>& plane) {
  const std::size_t nxy = mask.grid.in_plane_size();
  mask.selected.assign(mask.grid.size(), 0);
  for (std::size_t k = 0; k < mask.grid.dims[2]; ++k)
    std::copy(plane.begin(), plane.end(), mask.selected.begin() + static_cast<std::ptrdiff_t>(k * nxy));
}

void check_R(const VoxelGrid& grid, double R, const char* what) {
  grid.validate();
  if (!(R >= 1.0) || !std::isfinite(R))
    throw InvalidArgument(std::string(what) + ": R must be >= 1");
  if (R > static_cast<double>(grid.in_plane_size()))
    throw InvalidArgument(std::string(what) + ": R exceeds the number of in-plane points");
}

std::size_t wrap_index(long k, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

// Arc length of r = b phi from 0 to phi.
double spiral_arc_length(double b, double phi) {
  return 0.5 * b * (phi * std::sqrt(1.0 + phi * phi) + std::asinh(phi));
}

// Snaps n arc-length-equispaced spiral points to the lattice; returns the set of
// distinct in-plane linear indices.
std::vector<std::size_t> spiral_points(const VoxelGrid& grid, int turns, std::size_t n) {
  const std::size_t nx = grid.dims[0];
  const std::size_t ny = grid.dims[1];
  const double r_final = 0.5 * static_cast<double>(std::min(nx, ny));
  const double phi_end = 2.0 * std::numbers::pi * turns;
  const double b = r_final / phi_end;
  const double total = spiral_arc_length(b, phi_end);

  std::set<std::size_t> unique;
  unique.insert(0);  // DC
  double phi = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double s = total * static_cast<double>(i) / static_cast<double>(n - 1);
    // Newton on s(phi) = s, warm-started from the previous point; ds/dphi > 0.
    for (int it = 0; it < 50; ++it) {
      const double f = spiral_arc_length(b, phi) - s;
      const double df = b * std::sqrt(1.0 + phi * phi);
      const double step = f / df;
      phi = std::clamp(phi - step, 0.0, phi_end);
      if (std::abs(step) < 1e-12 * (1.0 + phi)) break;
    }
    const double r = b * phi;
    const long kx = std::lround(r * std::cos(phi));
    const long ky = std::lround(r * std::sin(phi));
    unique.insert(wrap_index(kx, nx) + nx * wrap_index(ky, ny));
  }
  return {unique.begin(), unique.end()};
}

}  // namespace

std::string_view to_string(MaskPattern p) noexcept {
  switch (p) {
    case MaskPattern::Full: return "full";
    case MaskPattern::Spiral: return "spiral";
    case MaskPattern::GaussianRandom: return "gaussian";
    case MaskPattern::Composed: return "composed";
  }
  return "unknown";
}

MaskPattern mask_pattern_from_string(std::string_view name) {
  if (name == "full") return MaskPattern::Full;
  if (name == "spiral") return MaskPattern::Spiral;
  if (name == "gaussian") return MaskPattern::GaussianRandom;
  if (name == "composed") return MaskPattern::Composed;
  throw InvalidArgument("unknown mask pattern '" + std::string(name) + "'");
}

std::size_t SamplingMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), std::uint8_t{1}));
}

double SamplingMask::achieved_R() const {
  const std::size_t c = count();
  if (c == 0) throw InvalidArgument("SamplingMask: no voxel selected");
  return static_cast<double>(selected.size()) / static_cast<double>(c);
}

SamplingMask make_full_mask(const VoxelGrid& grid) {
  grid.validate();
  SamplingMask m;
  m.grid = grid;
  m.selected.assign(grid.size(), 1);
  m.target_R = 1.0;
  m.pattern = MaskPattern::Full;
  return m;
}

SamplingMask make_spiral_mask(const VoxelGrid& grid, double R, int turns) {
  check_R(grid, R, "make_spiral_mask");
  if (turns < 1) throw InvalidArgument("make_spiral_mask: turns must be >= 1");
  if (R == 1.0) return make_full_mask(grid);

  const std::size_t nxy = grid.in_plane_size();
  const double target = static_cast<double>(nxy) / R;
  auto within = [&](std::size_t count) {
    return count > 0 && std::abs(static_cast<double>(nxy) / static_cast<double>(count) - R) <=
                            kRTolerance * R;
  };

  // Distinct point count grows (almost) monotonically with the number of
  // spiral samples: bisect for the first sample count that reaches the target,
  // then keep whichever neighbour lands closest.
  std::size_t lo = 2;
  std::size_t hi = 2;
  while (spiral_points(grid, turns, hi).size() < target) {
    if (hi > 64 * nxy) throw InvalidArgument("make_spiral_mask: spiral cannot reach the requested R; increase turns");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (spiral_points(grid, turns, mid).size() < target) lo = mid; else hi = mid;
  }
  std::vector<std::size_t> best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t n = (lo > 2 ? lo - 1 : 2); n <= hi + 1; ++n) {
    auto pts = spiral_points(grid, turns, n);
    const double gap = std::abs(static_cast<double>(pts.size()) - target);
    if (gap < best_gap) { best_gap = gap; best = std::move(pts); }
  }
  if (!within(best.size()))
    throw InvalidArgument("make_spiral_mask: could not reach R within 10%; increase turns");

  std::vector<std::uint8_t> plane(nxy, 0);
  for (std::size_t idx : best) plane[idx] = 1;
  SamplingMask m;
  m.grid = grid;
  m.target_R = R;
  m.pattern = MaskPattern::Spiral;
  replicate_along_z(m, plane);
  return m;
}

SamplingMask make_gaussian_mask(const VoxelGrid& grid, double R, double sigma_frac,
                                std::uint64_t seed) {
  check_R(grid, R, "make_gaussian_mask");
  if (!(sigma_frac > 0.0)) throw InvalidArgument("make_gaussian_mask: sigma_frac must be > 0");
  const std::size_t nx = grid.dims[0];
  const std::size_t ny = grid.dims[1];
  const std::size_t nxy = nx * ny;
  const auto wanted = static_cast<std::size_t>(std::ceil(static_cast<double>(nxy) / R - 1e-9));
  if (wanted >= nxy) {
    SamplingMask full = make_full_mask(grid);
    return full;
  }

  // Gumbel-top-k: the `wanted - 1` largest log(w) + Gumbel keys form a sample
  // without replacement proportional to w. Log-weights avoid underflow.
  const double s = sigma_frac * static_cast<double>(std::min(nx, ny));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<double, std::size_t>> keys;
  keys.reserve(nxy - 1);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double u = std::max(unif(rng), std::numeric_limits<double>::min());
      if (i == 0 && j == 0) continue;
      const double kx = centered_frequency(i, nx);
      const double ky = centered_frequency(j, ny);
      const double log_w = -(kx * kx + ky * ky) / (2.0 * s * s);
      keys.emplace_back(log_w - std::log(-std::log(u)), i + nx * j);
    }
  }
  const auto take = static_cast<std::ptrdiff_t>(wanted - 1);
  std::partial_sort(keys.begin(), keys.begin() + take, keys.end(),
                    [](const auto& a, const auto& b) {
                      return a.first > b.first || (a.first == b.first && a.second < b.second);
                    });
  std::vector<std::uint8_t> plane(nxy, 0);
  plane[0] = 1;
  for (std::ptrdiff_t n = 0; n < take; ++n) plane[keys[static_cast<std::size_t>(n)].second] = 1;

  SamplingMask m;
  m.grid = grid;
  m.target_R = R;
  m.pattern = MaskPattern::GaussianRandom;
  replicate_along_z(m, plane);
  return m;
}

SamplingMask compose_masks(const SamplingMask& base, const SamplingMask& overlay) {
  require_same_grid(base.grid, overlay.grid, "compose_masks");
  if (base.pattern == MaskPattern::Full && base.count() == base.selected.size()) return overlay;
  if (overlay.pattern == MaskPattern::Full && overlay.count() == overlay.selected.size())
    return base;
  SamplingMask m;
  m.grid = base.grid;
  m.selected.resize(base.selected.size());
  for (std::size_t n = 0; n < m.selected.size(); ++n)
    m.selected[n] = (base.selected[n] && overlay.selected[n]) ? 1 : 0;
  if (m.count() == 0) throw InvalidArgument("compose_masks: empty intersection");
  m.pattern = MaskPattern::Composed;
  m.target_R = m.achieved_R();
  return m;
}

int centered_frequency(std::size_t i, std::size_t n) noexcept {
  const auto ii = static_cast<long>(i);
  const auto nn = static_cast<long>(n);
  return static_cast<int>(ii < (nn + 1) / 2 ? ii : ii - nn);
}

double mean_selected_radius(const SamplingMask& mask) {
  const std::size_t nx = mask.grid.dims[0];
  const std::size_t ny = mask.grid.dims[1];
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (mask.selected[i + nx * j]) {
        sum += std::hypot(centered_frequency(i, nx), centered_frequency(j, ny));
        ++count;
      }
  return count ? sum / static_cast<double>(count) : 0.0;
}

void write_mask_pgm(const SamplingMask& mask, std::ostream& out) {
  const std::size_t nx = mask.grid.dims[0];
  const std::size_t ny = mask.grid.dims[1];
  out << "P5\n" << nx << ' ' << ny << "\n255\n";
  for (std::size_t py = 0; py < ny; ++py) {
    const std::size_t j = (py + ny - ny / 2) % ny;
    for (std::size_t px = 0; px < nx; ++px) {
      const std::size_t i = (px + nx - nx / 2) % nx;
      const char v = mask.selected[i + nx * j] ? static_cast<char>(255) : 0;
      out.put(v);
    }
  }
}

void write_mask_pgm(const SamplingMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_mask_pgm(mask, out);
}

}  // namespace kflow::imaging
