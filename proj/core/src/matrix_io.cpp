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

#include "haarlab/matrix_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace haarlab {

std::string format_hexfloat(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_double(const std::string &token) {
    if (token.empty()) {
        throw FormatError("expected a number, found nothing");
    }
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
        throw FormatError("not a number: '" + token + "'");
    }
    if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL)) {
        throw FormatError("number out of range: '" + token + "'");
    }
    return v;
}

void write_matrix(std::ostream &os, const ComplexMatrix &m) {
    os << "complex-matrix v1 " << m.rows() << ' ' << m.cols() << '\n';
    for (const Complex &z : m.data()) {
        os << format_hexfloat(z.real()) << ' ' << format_hexfloat(z.imag())
           << '\n';
    }
}

ComplexMatrix read_matrix(std::istream &is) {
    std::string tag;
    std::string version;
    long long rows = 0;
    long long cols = 0;
    if (!(is >> tag >> version >> rows >> cols) || tag != "complex-matrix" ||
        version != "v1") {
        throw FormatError("expected header 'complex-matrix v1 <rows> <cols>'");
    }
    if (rows <= 0 || cols <= 0) {
        throw FormatError("matrix dimensions must be positive");
    }
    ComplexMatrix m(static_cast<std::size_t>(rows),
                    static_cast<std::size_t>(cols));
    std::string re;
    std::string im;
    std::size_t index = 0;
    for (Complex &z : m.data()) {
        if (!(is >> re >> im)) {
            throw FormatError("matrix truncated after " + std::to_string(index) +
                              " entries");
        }
        z = {parse_double(re), parse_double(im)};
        ++index;
    }
    if (!m.all_finite()) {
        throw FormatError("matrix contains non-finite entries");
    }
    return m;
}

} // namespace haarlab
