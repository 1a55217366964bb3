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

#ifndef KFLOW_ERROR_HPP_
#define KFLOW_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kflow {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that violate a documented precondition (grid mismatch, bad ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A linear solve failed or produced non-finite values.
class SolverError : public Error {
 public:
  using Error::Error;
};

// The filter could not continue: a particle's forward run failed or the
// innovation precision matrix stopped being positive definite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::ptrdiff_t particle = -1)
      : Error(what), particle_(particle) {}

  // Index of the failing particle, or -1 when the failure is not tied to one.
  std::ptrdiff_t particle() const noexcept { return particle_; }

 private:
  std::ptrdiff_t particle_;
};

}  // namespace kflow

#endif  // KFLOW_ERROR_HPP_
