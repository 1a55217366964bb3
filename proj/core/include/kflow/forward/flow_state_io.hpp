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

#ifndef KFLOW_FORWARD_FLOW_STATE_IO_HPP_
#define KFLOW_FORWARD_FLOW_STATE_IO_HPP_

#include <iosfwd>
#include <string>

#include "kflow/forward/navier_stokes.hpp"

namespace kflow::forward {

// FlowState in the KFE1 container (dtype FlowState). dims = {nodes, 1, 1};
// the extra block holds f64 t and u64 outlet count K; the payload is u (3n),
// p (n) and pi (K) as f64.
void write_flow_state(std::ostream& out, const FlowState& s);
FlowState read_flow_state(std::istream& in);
void save_flow_state(const std::string& path, const FlowState& s);
FlowState load_flow_state(const std::string& path);

}  // namespace kflow::forward

#endif  // KFLOW_FORWARD_FLOW_STATE_IO_HPP_
