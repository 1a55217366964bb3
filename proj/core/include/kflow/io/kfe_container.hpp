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

#ifndef KFLOW_IO_KFE_CONTAINER_HPP_
#define KFLOW_IO_KFE_CONTAINER_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kflow/imaging/sampling_mask.hpp"
#include "kflow/imaging/voxel_grid.hpp"

// KFE1 binary container, little-endian throughout:
//
//   offset  size  field
//   0       4     magic "KFE1"
//   4       4     u32 dtype tag (see DType)
//   8       24    u64 dims[3]
//   32      24    f64 spacing[3]
//   56      24    f64 origin[3]
//   80      4     u32 extra byte count E
//   84      E     dtype-specific metadata
//   84+E    ...   payload, row-major with x fastest
//
// Payloads: Real64 -> f64 per voxel; Complex128 -> (re, im) f64 pairs;
// Mask8 -> u8 per voxel with metadata (f64 target_R, u32 pattern);
// FlowState -> see kflow/forward/flow_state_io.hpp.
namespace kflow::io {

enum class DType : std::uint32_t { Real64 = 1, Complex128 = 2, Mask8 = 3, FlowState = 4 };

struct KfeHeader {
  DType dtype = DType::Real64;
  imaging::VoxelGrid grid;
  std::vector<std::uint8_t> extra;
};

void write_header(std::ostream& out, const KfeHeader& h);
KfeHeader read_header(std::istream& in);

void write_f64(std::ostream& out, double v);
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
double read_f64(std::istream& in);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);

void write_field(std::ostream& out, const imaging::ScalarField& f);
void write_field(std::ostream& out, const imaging::ComplexField& f);
void write_mask(std::ostream& out, const imaging::SamplingMask& m);

imaging::ScalarField read_scalar_field(std::istream& in);
imaging::ComplexField read_complex_field(std::istream& in);
imaging::SamplingMask read_mask(std::istream& in);

void save(const std::string& path, const imaging::ScalarField& f);
void save(const std::string& path, const imaging::ComplexField& f);
void save(const std::string& path, const imaging::SamplingMask& m);
imaging::ScalarField load_scalar_field(const std::string& path);
imaging::ComplexField load_complex_field(const std::string& path);
imaging::SamplingMask load_mask(const std::string& path);

// Peeks at a file's dtype tag.
DType peek_dtype(const std::string& path);

}  // namespace kflow::io

#endif  // KFLOW_IO_KFE_CONTAINER_HPP_
