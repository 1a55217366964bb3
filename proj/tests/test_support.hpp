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

#ifndef KFLOW_TESTS_TEST_SUPPORT_HPP_
#define KFLOW_TESTS_TEST_SUPPORT_HPP_

#include <complex>
#include <cstdint>
#include <random>

#include "kflow/imaging/voxel_grid.hpp"

namespace kflow::testing {

inline imaging::ComplexField random_complex(const imaging::VoxelGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  imaging::ComplexField f(g);
  for (auto& v : f.values) v = {u(rng), u(rng)};
  return f;
}

inline imaging::ScalarField random_real(const imaging::VoxelGrid& g, std::uint64_t seed, double lo = -1.0,
                                        double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  imaging::ScalarField f(g);
  for (auto& v : f.values) v = u(rng);
  return f;
}

// Direct triple sum of the unnormalized forward (sign = -1) or inverse
// (sign = +1, with 1/N) DFT.
inline imaging::ComplexField naive_dft3(const imaging::ComplexField& x, int sign) {
  const auto& d = x.grid.dims;
  imaging::ComplexField y(x.grid);
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (std::size_t k3 = 0; k3 < d[2]; ++k3)
    for (std::size_t k2 = 0; k2 < d[1]; ++k2)
      for (std::size_t k1 = 0; k1 < d[0]; ++k1) {
        std::complex<long double> acc = 0.0L;
        for (std::size_t n3 = 0; n3 < d[2]; ++n3)
          for (std::size_t n2 = 0; n2 < d[1]; ++n2)
            for (std::size_t n1 = 0; n1 < d[0]; ++n1) {
              const long double phase =
                  sign * two_pi *
                  (static_cast<long double>(k1 * n1 % d[0]) / d[0] + static_cast<long double>(k2 * n2 % d[1]) / d[1] +
                   static_cast<long double>(k3 * n3 % d[2]) / d[2]);
              const auto v = x.at(n1, n2, n3);
              acc += std::complex<long double>(v.real(), v.imag()) *
                     std::complex<long double>(std::cos(phase), std::sin(phase));
            }
        if (sign > 0) acc /= static_cast<long double>(x.size());
        y.at(k1, k2, k3) = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
      }
  return y;
}

inline double relative_error(const imaging::ComplexField& a, const imaging::ComplexField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    num += std::norm(a[n] - b[n]);
    den += std::norm(b[n]);
  }
  return std::sqrt(num / den);
}

}  // namespace kflow::testing

#endif  // KFLOW_TESTS_TEST_SUPPORT_HPP_
