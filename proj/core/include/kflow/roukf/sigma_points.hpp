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

#ifndef KFLOW_ROUKF_SIGMA_POINTS_HPP_
#define KFLOW_ROUKF_SIGMA_POINTS_HPP_

#include <Eigen/Core>

namespace kflow::roukf {

// Canonical sigma points: column i of `points` is sqrt(p) e_i for i < p and
// -sqrt(p) e_{i-p} otherwise; all carry the weight alpha = 1 / (2p).
struct SigmaPoints {
  Eigen::MatrixXd points;  // p x 2p
  double alpha = 0.0;

  int dimension() const noexcept { return static_cast<int>(points.rows()); }
  int count() const noexcept { return static_cast<int>(points.cols()); }
};

SigmaPoints canonical_sigma_points(int p);

}  // namespace kflow::roukf

#endif  // KFLOW_ROUKF_SIGMA_POINTS_HPP_
