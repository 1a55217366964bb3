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

#include "kflow/imaging/fourier.hpp"

#include <fftw3.h>

#include <mutex>

#include "kflow/error.hpp"

namespace kflow::imaging {
namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

ComplexField transform(const ComplexField& in, int sign) {
  require_consistent(in, "dft3");
  in.grid.validate();
  ComplexField out(in.grid);
  if (in.size() == 0) return out;
  // Storage is x fastest, so FFTW sees the row-major array (Nz, Ny, Nx).
  const int nz = static_cast<int>(in.grid.dims[2]);
  const int ny = static_cast<int>(in.grid.dims[1]);
  const int nx = static_cast<int>(in.grid.dims[0]);
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.values.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.values.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE never touches the arrays while planning.
    plan = fftw_plan_dft_3d(nz, ny, nx, src, dst, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw SolverError("dft3: FFTW failed to create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

ComplexField dft3(const ComplexField& field) { return transform(field, FFTW_FORWARD); }

ComplexField idft3(const ComplexField& kspace) {
  ComplexField out = transform(kspace, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out.values) v *= scale;
  return out;
}

}  // namespace kflow::imaging
