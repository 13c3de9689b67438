// Copyright 2026 The Expressibench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace expressibench {

/// Numerical tolerances and size caps shared by every module.
struct Tolerances {
    double norm = 1e-10;         // state normalization
    double unitary = 1e-12;      // gate matrices
    double haar_unitary = 1e-10; // sampled unitaries
    double hermitian = 1e-12;    // dense observables
    double imaginary = 1e-10;    // residue allowed on real expectation values
    double trace = 1e-10;        // moment operators

    double theorem_sigmas = 3.0; // slack on theorem holds flags
    double lemma_sigmas = 4.0;   // pass threshold of lemma checks
    // Absolute floor for lemma checks whose samples are constant up to rounding.
    double lemma_rounding_floor = 1e-9;

    std::size_t max_qubits = 14;
    std::size_t max_oracle_dim = 64;  // d^t for exact moment operators
    std::size_t min_haar_dim = 2;
    std::size_t max_haar_dim = 64;
};

inline constexpr Tolerances kTol{};

struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string &what) : std::invalid_argument(what) {}
};

struct IndexError : std::out_of_range {
    explicit IndexError(const std::string &what) : std::out_of_range(what) {}
};

struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

struct DomainError : std::domain_error {
    explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

}  // namespace expressibench
