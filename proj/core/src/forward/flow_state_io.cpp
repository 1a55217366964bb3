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

#include "kflow/forward/flow_state_io.hpp"

#include <cstring>
#include <fstream>

#include "kflow/error.hpp"
#include "kflow/io/kfe_container.hpp"

namespace kflow::forward {

void write_flow_state(std::ostream& out, const FlowState& s) {
  const auto n = static_cast<std::size_t>(s.p.size());
  if (s.u.size() != static_cast<Eigen::Index>(3 * n))
    throw InvalidArgument("write_flow_state: u and p sizes disagree");
  io::KfeHeader h;
  h.dtype = io::DType::FlowState;
  h.grid = imaging::VoxelGrid({std::max<std::size_t>(n, 1), 1, 1});
  h.extra.resize(16);
  const double t = s.t;
  const auto K = static_cast<std::uint64_t>(s.pi.size());
  std::memcpy(h.extra.data(), &t, 8);
  std::memcpy(h.extra.data() + 8, &K, 8);
  io::write_header(out, h);
  for (const Eigen::VectorXd* v : {&s.u, &s.p, &s.pi})
    for (Eigen::Index i = 0; i < v->size(); ++i) io::write_f64(out, (*v)[i]);
  if (!out) throw FormatError("write_flow_state: write failed");
}

FlowState read_flow_state(std::istream& in) {
  const auto h = io::read_header(in);
  if (h.dtype != io::DType::FlowState) throw FormatError("read_flow_state: not a FlowState file");
  if (h.extra.size() != 16) throw FormatError("read_flow_state: bad metadata block");
  FlowState s;
  std::uint64_t K = 0;
  std::memcpy(&s.t, h.extra.data(), 8);
  std::memcpy(&K, h.extra.data() + 8, 8);
  const auto n = static_cast<Eigen::Index>(h.grid.dims[0]);
  s.u.resize(3 * n);
  s.p.resize(n);
  s.pi.resize(static_cast<Eigen::Index>(K));
  for (Eigen::VectorXd* v : {&s.u, &s.p, &s.pi})
    for (Eigen::Index i = 0; i < v->size(); ++i) (*v)[i] = io::read_f64(in);
  return s;
}

void save_flow_state(const std::string& path, const FlowState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_flow_state(out, s);
}

FlowState load_flow_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_flow_state(in);
}

}  // namespace kflow::forward
