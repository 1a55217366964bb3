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

#include "kflow/roukf/sigma_points.hpp"

#include <cmath>

#include "kflow/error.hpp"

namespace kflow::roukf {

SigmaPoints canonical_sigma_points(int p) {
  if (p < 1) throw InvalidArgument("canonical_sigma_points: p must be >= 1");
  SigmaPoints s;
  s.points = Eigen::MatrixXd::Zero(p, 2 * p);
  const double r = std::sqrt(static_cast<double>(p));
  for (int i = 0; i < p; ++i) {
    s.points(i, i) = r;
    s.points(i, p + i) = -r;
  }
  s.alpha = 1.0 / (2.0 * p);
  return s;
}

}  // namespace kflow::roukf
