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

#include "kflow/imaging/acquisition.hpp"

#include <cmath>
#include <random>

#include "kflow/error.hpp"
#include "kflow/imaging/encoding.hpp"
#include "kflow/imaging/fourier.hpp"

namespace kflow::imaging {

void AcquisitionConfig::validate() const {
  if (!(venc > 0.0)) throw InvalidArgument("AcquisitionConfig: venc must be positive");
  if (!(snr > 0.0)) throw InvalidArgument("AcquisitionConfig: snr must be positive");
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw InvalidArgument("AcquisitionConfig: direction must be a unit vector");
  if (!(measurement_period > 0.0))
    throw InvalidArgument("AcquisitionConfig: measurement period must be positive");
}

void apply_mask(ComplexField& kspace, const SamplingMask& mask) {
  require_same_grid(kspace.grid, mask.grid, "apply_mask");
  for (std::size_t n = 0; n < kspace.size(); ++n)
    if (!mask.selected[n]) kspace[n] = Complex(0.0, 0.0);
}

ComplexField simulate_kspace(const ComplexField& m, const SamplingMask& mask, double sigma,
                             std::uint64_t seed) {
  require_same_grid(m.grid, mask.grid, "simulate_kspace");
  if (!(sigma >= 0.0)) throw InvalidArgument("simulate_kspace: sigma must be >= 0");
  ComplexField y = dft3(m);
  if (sigma > 0.0 && std::isfinite(sigma)) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& v : y.values) {
      const double re = noise(rng);
      const double im = noise(rng);
      v += Complex(re, im);
    }
  }
  apply_mask(y, mask);
  return y;
}

double snr_to_sigma(const ScalarField& magnitude, const std::vector<std::uint8_t>& foreground,
                    double snr) {
  require_value_count(magnitude.grid, foreground.size(), "snr_to_sigma");
  if (!(snr > 0.0)) throw InvalidArgument("snr_to_sigma: snr must be positive");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 0; n < foreground.size(); ++n)
    if (foreground[n]) {
      sum += magnitude[n];
      ++count;
    }
  if (count == 0) throw InvalidArgument("snr_to_sigma: empty foreground");
  if (std::isinf(snr)) return 0.0;
  const double mean = sum / static_cast<double>(count);
  return mean * std::sqrt(static_cast<double>(magnitude.size())) / snr;
}

double measured_image_snr(const ComplexField& image, const ComplexField& reference,
                          const std::vector<std::uint8_t>& foreground) {
  require_same_grid(image.grid, reference.grid, "measured_image_snr");
  double mag = 0.0;
  double sum = 0.0;
  double sum2 = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 0; n < foreground.size(); ++n) {
    if (!foreground[n]) continue;
    mag += std::abs(reference[n]);
    const Complex d = image[n] - reference[n];
    sum += d.real() + d.imag();
    sum2 += d.real() * d.real() + d.imag() * d.imag();
    ++count;
  }
  if (count < 2) throw InvalidArgument("measured_image_snr: foreground too small");
  const double k = 2.0 * static_cast<double>(count);
  const double var = (sum2 - sum * sum / k) / (k - 1.0);
  return (mag / static_cast<double>(count)) / std::sqrt(var);
}

ComplexField zero_filled_reconstruction(const ComplexField& kspace, const SamplingMask& mask) {
  require_same_grid(kspace.grid, mask.grid, "zero_filled_reconstruction");
  ComplexField masked = kspace;
  apply_mask(masked, mask);
  return idft3(masked);
}

double estimate_noise_std(const ComplexField& y0, const ScalarField& magnitude,
                          const ScalarField& phi_back, const SamplingMask& mask) {
  require_same_grid(y0.grid, mask.grid, "estimate_noise_std");
  if (mask.count() < 2) throw InvalidArgument("estimate_noise_std: fewer than 2 selected voxels");
  const ScalarField zero(magnitude.grid, 0.0);
  // encode with u = 0 reduces to M exp(i phi_back); venc is irrelevant.
  const ComplexField model = dft3(encode_magnetization(magnitude, zero, phi_back, 1.0));
  require_same_grid(model.grid, y0.grid, "estimate_noise_std");
  double sum = 0.0;
  double sum2 = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 0; n < y0.size(); ++n) {
    if (!mask.selected[n]) continue;
    const Complex d = y0[n] - model[n];
    sum += d.real() + d.imag();
    sum2 += d.real() * d.real() + d.imag() * d.imag();
    count += 2;
  }
  const double k = static_cast<double>(count);
  const double var = std::max(0.0, (sum2 - sum * sum / k) / (k - 1.0));
  return std::sqrt(var);
}

}  // namespace kflow::imaging
