// Copyright 2026 The gaussmetro Authors
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

#ifndef GAUSSMETRO_ERRORS_HPP
#define GAUSSMETRO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gaussmetro {

/// Argument outside the mathematical domain of an operation (negative photon
/// number, transmissivity outside [0,1], ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Shapes that do not fit together.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An input object fails a structural check (non-symplectic matrix,
/// unphysical covariance, ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A factorization or inverse failed, or a result came out inconsistent.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gaussmetro

#endif
