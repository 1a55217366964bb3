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

#include "kflow/io/kfe_container.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "kflow/error.hpp"

namespace kflow::io {

static_assert(std::endian::native == std::endian::little,
              "KFE1 I/O writes host-order doubles and requires a little-endian host");

namespace {

constexpr std::array<char, 4> kMagic{'K', 'F', 'E', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("KFE1: unexpected end of data");
  return v;
}

void expect(const KfeHeader& h, DType t) {
  if (h.dtype != t)
    throw FormatError("KFE1: dtype tag " + std::to_string(static_cast<std::uint32_t>(h.dtype)) +
                      " does not match expected " + std::to_string(static_cast<std::uint32_t>(t)));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

}  // namespace

void write_f64(std::ostream& out, double v) { put(out, v); }
void write_u32(std::ostream& out, std::uint32_t v) { put(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { put(out, v); }
double read_f64(std::istream& in) { return get<double>(in); }
std::uint32_t read_u32(std::istream& in) { return get<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return get<std::uint64_t>(in); }

void write_header(std::ostream& out, const KfeHeader& h) {
  out.write(kMagic.data(), kMagic.size());
  put(out, static_cast<std::uint32_t>(h.dtype));
  for (auto d : h.grid.dims) put(out, static_cast<std::uint64_t>(d));
  for (int a = 0; a < 3; ++a) put(out, h.grid.spacing[a]);
  for (int a = 0; a < 3; ++a) put(out, h.grid.origin[a]);
  put(out, static_cast<std::uint32_t>(h.extra.size()));
  out.write(reinterpret_cast<const char*>(h.extra.data()), static_cast<std::streamsize>(h.extra.size()));
}

KfeHeader read_header(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("KFE1: bad magic bytes");
  KfeHeader h;
  h.dtype = static_cast<DType>(get<std::uint32_t>(in));
  for (auto& d : h.grid.dims) d = static_cast<std::size_t>(get<std::uint64_t>(in));
  for (int a = 0; a < 3; ++a) h.grid.spacing[a] = get<double>(in);
  for (int a = 0; a < 3; ++a) h.grid.origin[a] = get<double>(in);
  const auto extra = get<std::uint32_t>(in);
  h.extra.resize(extra);
  in.read(reinterpret_cast<char*>(h.extra.data()), extra);
  if (!in) throw FormatError("KFE1: truncated metadata");
  return h;
}

void write_field(std::ostream& out, const imaging::ScalarField& f) {
  imaging::require_consistent(f, "write_field");
  write_header(out, {DType::Real64, f.grid, {}});
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

void write_field(std::ostream& out, const imaging::ComplexField& f) {
  imaging::require_consistent(f, "write_field");
  write_header(out, {DType::Complex128, f.grid, {}});
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(imaging::Complex)));
}

void write_mask(std::ostream& out, const imaging::SamplingMask& m) {
  imaging::require_value_count(m.grid, m.selected.size(), "write_mask");
  KfeHeader h{DType::Mask8, m.grid, std::vector<std::uint8_t>(12)};
  const auto pattern = static_cast<std::uint32_t>(m.pattern);
  std::memcpy(h.extra.data(), &m.target_R, 8);
  std::memcpy(h.extra.data() + 8, &pattern, 4);
  write_header(out, h);
  out.write(reinterpret_cast<const char*>(m.selected.data()),
            static_cast<std::streamsize>(m.selected.size()));
}

imaging::ScalarField read_scalar_field(std::istream& in) {
  const KfeHeader h = read_header(in);
  expect(h, DType::Real64);
  h.grid.validate();
  imaging::ScalarField f(h.grid);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) throw FormatError("KFE1: truncated payload");
  return f;
}

imaging::ComplexField read_complex_field(std::istream& in) {
  const KfeHeader h = read_header(in);
  expect(h, DType::Complex128);
  h.grid.validate();
  imaging::ComplexField f(h.grid);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(imaging::Complex)));
  if (!in) throw FormatError("KFE1: truncated payload");
  return f;
}

imaging::SamplingMask read_mask(std::istream& in) {
  const KfeHeader h = read_header(in);
  expect(h, DType::Mask8);
  h.grid.validate();
  if (h.extra.size() != 12) throw FormatError("KFE1: mask metadata must be 12 bytes");
  imaging::SamplingMask m;
  m.grid = h.grid;
  std::uint32_t pattern = 0;
  std::memcpy(&m.target_R, h.extra.data(), 8);
  std::memcpy(&pattern, h.extra.data() + 8, 4);
  if (pattern > static_cast<std::uint32_t>(imaging::MaskPattern::Composed))
    throw FormatError("KFE1: unknown mask pattern tag");
  m.pattern = static_cast<imaging::MaskPattern>(pattern);
  m.selected.resize(h.grid.size());
  in.read(reinterpret_cast<char*>(m.selected.data()), static_cast<std::streamsize>(m.selected.size()));
  if (!in) throw FormatError("KFE1: truncated payload");
  for (auto& s : m.selected)
    if (s > 1) throw FormatError("KFE1: mask entries must be 0 or 1");
  return m;
}

void save(const std::string& path, const imaging::ScalarField& f) {
  auto out = open_out(path);
  write_field(out, f);
}
void save(const std::string& path, const imaging::ComplexField& f) {
  auto out = open_out(path);
  write_field(out, f);
}
void save(const std::string& path, const imaging::SamplingMask& m) {
  auto out = open_out(path);
  write_mask(out, m);
}
imaging::ScalarField load_scalar_field(const std::string& path) {
  auto in = open_in(path);
  return read_scalar_field(in);
}
imaging::ComplexField load_complex_field(const std::string& path) {
  auto in = open_in(path);
  return read_complex_field(in);
}
imaging::SamplingMask load_mask(const std::string& path) {
  auto in = open_in(path);
  return read_mask(in);
}

DType peek_dtype(const std::string& path) {
  auto in = open_in(path);
  return read_header(in).dtype;
}

}  // namespace kflow::io
