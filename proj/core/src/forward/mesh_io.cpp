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

#include "kflow/forward/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "kflow/error.hpp"

namespace kflow::forward {
namespace {

// Next non-empty line that is not a comment.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

std::size_t read_section(std::istream& in, const std::string& name) {
  std::string line;
  if (!next_line(in, line)) throw FormatError("mesh: missing '" + name + "' section");
  std::istringstream ss(line);
  std::string word;
  long long count = -1;
  if (!(ss >> word >> count) || word != name || count < 0)
    throw FormatError("mesh: expected '" + name + " <count>', got '" + line + "'");
  return static_cast<std::size_t>(count);
}

template <typename... T>
void parse_row(std::istream& in, const char* what, T&... out) {
  std::string line;
  if (!next_line(in, line)) throw FormatError(std::string("mesh: truncated ") + what + " section");
  std::istringstream ss(line);
  if (!((ss >> out) && ...)) throw FormatError(std::string("mesh: malformed ") + what + " row: " + line);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("mesh: cannot open " + path);
  return in;
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw FormatError("mesh: empty input");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "kflow-mesh" || version != 1)
      throw FormatError("mesh: expected header 'kflow-mesh 1'");
  }
  Mesh mesh;
  mesh.nodes.resize(read_section(in, "nodes"));
  for (auto& x : mesh.nodes) parse_row(in, "nodes", x[0], x[1], x[2]);
  mesh.tets.resize(read_section(in, "tets"));
  for (auto& t : mesh.tets) parse_row(in, "tets", t[0], t[1], t[2], t[3]);
  mesh.faces.resize(read_section(in, "faces"));
  for (auto& f : mesh.faces) parse_row(in, "faces", f.nodes[0], f.nodes[1], f.nodes[2], f.tag);
  mesh.validate();
  return mesh;
}

Mesh read_mesh_file(const std::string& path) {
  auto in = open(path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "kflow-mesh 1\n";
  out << "nodes " << mesh.nodes.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& x : mesh.nodes) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  out << "tets " << mesh.tets.size() << '\n';
  for (const auto& t : mesh.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  out << "faces " << mesh.faces.size() << '\n';
  for (const auto& f : mesh.faces)
    out << f.nodes[0] << ' ' << f.nodes[1] << ' ' << f.nodes[2] << ' ' << f.tag << '\n';
  if (!out) throw FormatError("mesh: write failed");
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw FormatError("mesh: cannot create " + path);
  write_mesh(out, mesh);
}

Mesh read_gmsh2(std::istream& in) {
  std::string line;
  std::map<long, int> node_index;
  Mesh mesh;
  bool have_format = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "$MeshFormat") {
      double version = 0.0;
      int file_type = -1;
      int data_size = 0;
      if (!(in >> version >> file_type >> data_size) || version < 2.0 || version >= 3.0)
        throw FormatError("gmsh: only MSH 2.x is supported");
      if (file_type != 0) throw FormatError("gmsh: only ASCII files are supported");
      have_format = true;
    } else if (line == "$Nodes") {
      std::size_t n = 0;
      if (!(in >> n)) throw FormatError("gmsh: bad node count");
      mesh.nodes.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        long id = 0;
        auto& x = mesh.nodes[i];
        if (!(in >> id >> x[0] >> x[1] >> x[2])) throw FormatError("gmsh: truncated $Nodes");
        node_index[id] = static_cast<int>(i);
      }
    } else if (line == "$Elements") {
      std::size_t n = 0;
      if (!(in >> n)) throw FormatError("gmsh: bad element count");
      for (std::size_t i = 0; i < n; ++i) {
        long id = 0;
        int type = 0;
        int ntags = 0;
        if (!(in >> id >> type >> ntags) || ntags < 0) throw FormatError("gmsh: truncated $Elements");
        std::vector<long> tags(static_cast<std::size_t>(ntags));
        for (auto& t : tags) in >> t;
        static const std::map<int, int> kNodesPerType = {{15, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 4}};
        const auto it = kNodesPerType.find(type);
        if (it == kNodesPerType.end())
          throw FormatError("gmsh: unsupported element type " + std::to_string(type));
        std::vector<int> v(static_cast<std::size_t>(it->second));
        for (auto& k : v) {
          long nid = 0;
          if (!(in >> nid)) throw FormatError("gmsh: truncated element");
          const auto found = node_index.find(nid);
          if (found == node_index.end()) throw FormatError("gmsh: element references unknown node");
          k = found->second;
        }
        if (!in) throw FormatError("gmsh: truncated $Elements");
        if (type == 4) {
          mesh.tets.push_back({v[0], v[1], v[2], v[3]});
        } else if (type == 2) {
          if (tags.empty()) throw FormatError("gmsh: boundary triangle without physical tag");
          mesh.faces.push_back({{v[0], v[1], v[2]}, static_cast<int>(tags[0])});
        }
      }
    }
  }
  if (!have_format) throw FormatError("gmsh: missing $MeshFormat");
  mesh.orient();
  mesh.validate();
  return mesh;
}

Mesh read_gmsh2_file(const std::string& path) {
  auto in = open(path);
  return read_gmsh2(in);
}

Mesh load_mesh(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".msh") return read_gmsh2_file(path);
  return read_mesh_file(path);
}

}  // namespace kflow::forward
