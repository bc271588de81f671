// Copyright 2026 The haarlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "haarlab/complex_matrix.hpp"

namespace haarlab {

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Text dump format:
//
//   complex-matrix v1 <rows> <cols>
//   <re> <im>            (rows * cols lines, row-major)
//
// Writers emit hexadecimal floats so that a write/read cycle is bit-exact.
// Readers accept hexadecimal or decimal floats.

void write_matrix(std::ostream &os, const ComplexMatrix &m);
[[nodiscard]] ComplexMatrix read_matrix(std::istream &is);

[[nodiscard]] std::string format_hexfloat(double x);
/// Parses a decimal or hexadecimal float; the whole token must be consumed.
[[nodiscard]] double parse_double(const std::string &token);

} // namespace haarlab
