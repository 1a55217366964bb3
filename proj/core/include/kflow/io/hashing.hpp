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

#ifndef KFLOW_IO_HASHING_HPP_
#define KFLOW_IO_HASHING_HPP_

#include <span>
#include <string>

namespace kflow::io {

// Lowercase hex SHA-256 digests.
std::string sha256_hex(std::span<const unsigned char> bytes);
std::string sha256_file(const std::string& path);

}  // namespace kflow::io

#endif  // KFLOW_IO_HASHING_HPP_
