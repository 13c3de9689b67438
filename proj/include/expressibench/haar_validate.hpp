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

/**
 * @file Monte Carlo checks of the first and second Haar moment identities.
 *
 *   E_W Tr[W A W^+ B] = Tr[A] Tr[B] / d
 *
 *   E_W Tr[W A W^+ B] Tr[W C W^+ D]
 *     = (Tr[A]Tr[B]Tr[C]Tr[D] + Tr[AC]Tr[BD]) / (d^2 - 1)
 *       - (Tr[AC]Tr[B]Tr[D] + Tr[A]Tr[C]Tr[BD]) / (d (d^2 - 1))
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "expressibench/config.hpp"
#include "expressibench/rng.hpp"
#include "expressibench/statevec.hpp"

namespace expressibench {

struct LemmaCheckResult {
    Complex estimate;
    Complex closed_form;
    double abs_error = 0.0;
    double std_err = 0.0;
    bool passes = false;
};

namespace detail {

inline void check_lemma_inputs(std::initializer_list<const Matrix *> ms, std::size_t m) {
    const Matrix &first = **ms.begin();
    for (const Matrix *x : ms) {
        if (x->rows() != x->cols() || x->rows() != first.rows()) {
            throw DimensionError("lemma operators must be square and of equal dimension");
        }
    }
    auto d = static_cast<std::size_t>(first.rows());
    if (d < kTol.min_haar_dim || d > kTol.max_haar_dim) {
        throw DimensionError("lemma dimension " + std::to_string(d) + " outside [2, 64]");
    }
    if (m < 2) {
        throw ValidationError("need at least 2 samples");
    }
}

/// Tr[X Y] without forming the product.
inline Complex trace_of_product(const Matrix &x, const Matrix &y) {
    return x.cwiseProduct(y.transpose()).sum();
}

/// Mean and complex standard error of a sample, then the pass decision.
inline LemmaCheckResult finish(const std::vector<Complex> &values, Complex closed) {
    const double m = static_cast<double>(values.size());
    Complex sum{0.0, 0.0};
    for (const auto &v : values) {
        sum += v;
    }
    Complex mean = sum / m;
    double ss = 0.0;
    for (const auto &v : values) {
        ss += std::norm(v - mean);
    }
    LemmaCheckResult r;
    r.estimate = mean;
    r.closed_form = closed;
    r.abs_error = std::abs(mean - closed);
    r.std_err = std::sqrt(ss / (m - 1.0) / m);
    // Samples that are constant up to rounding have a vanishing std_err.
    double floor = kTol.lemma_rounding_floor * (1.0 + std::abs(closed));
    r.passes = r.abs_error <= kTol.lemma_sigmas * r.std_err + floor;
    return r;
}

}  // namespace detail

inline Complex lemma1_closed_form(const Matrix &a, const Matrix &b) {
    return a.trace() * b.trace() / static_cast<double>(a.rows());
}

inline Complex lemma2_closed_form(const Matrix &a, const Matrix &b, const Matrix &c,
                                  const Matrix &d) {
    const double n = static_cast<double>(a.rows());
    Complex ta = a.trace(), tb = b.trace(), tc = c.trace(), td = d.trace();
    Complex tac = detail::trace_of_product(a, c);
    Complex tbd = detail::trace_of_product(b, d);
    return (ta * tb * tc * td + tac * tbd) / (n * n - 1.0) -
           (tac * tb * td + ta * tc * tbd) / (n * (n * n - 1.0));
}

/// Estimates E_W Tr[W A W^+ B] over m Haar unitaries.
inline LemmaCheckResult lemma1_check(const Matrix &a, const Matrix &b, std::size_t m,
                                     RngStream &rng) {
    detail::check_lemma_inputs({&a, &b}, m);
    const auto d = static_cast<std::size_t>(a.rows());
    std::vector<Complex> values;
    values.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        Matrix w = haar_unitary(d, rng);
        Matrix waw = w * a * w.adjoint();
        values.push_back(detail::trace_of_product(waw, b));
    }
    return detail::finish(values, lemma1_closed_form(a, b));
}

/// Estimates E_W Tr[W A W^+ B] Tr[W C W^+ D] over m Haar unitaries.
inline LemmaCheckResult lemma2_check(const Matrix &a, const Matrix &b, const Matrix &c,
                                     const Matrix &d, std::size_t m, RngStream &rng) {
    detail::check_lemma_inputs({&a, &b, &c, &d}, m);
    const auto dim = static_cast<std::size_t>(a.rows());
    std::vector<Complex> values;
    values.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        Matrix w = haar_unitary(dim, rng);
        Matrix wd = w.adjoint();
        Complex x = detail::trace_of_product(w * a * wd, b);
        Complex y = detail::trace_of_product(w * c * wd, d);
        values.push_back(x * y);
    }
    return detail::finish(values, lemma2_closed_form(a, b, c, d));
}

/// (G + G^+)/2 with G of independent standard complex normal entries.
inline Matrix random_hermitian(std::size_t d, RngStream &rng) {
    const auto dd = static_cast<Eigen::Index>(d);
    Matrix g(dd, dd);
    for (Eigen::Index c = 0; c < dd; ++c) {
        for (Eigen::Index r = 0; r < dd; ++r) {
            g(r, c) = rng.complex_normal();
        }
    }
    return 0.5 * (g + g.adjoint());
}

/// |0><0| on C^d.
inline Matrix zero_projector_matrix(std::size_t d) {
    const auto dd = static_cast<Eigen::Index>(d);
    Matrix p = Matrix::Zero(dd, dd);
    p(0, 0) = 1.0;
    return p;
}

struct LemmaSuiteRow {
    int lemma = 1;
    std::size_t dim = 0;
    std::size_t index = 0;
    LemmaCheckResult result;
};

struct LemmaSuiteConfig {
    std::vector<std::size_t> lemma1_dims{2, 4, 8};
    std::vector<std::size_t> lemma2_dims{2, 4};
    std::size_t cases = 20;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
};

/// Random Hermitian cases for both lemmas; each case has its own stream.
inline std::vector<LemmaSuiteRow> run_lemma_suite(const LemmaSuiteConfig &cfg) {
    std::vector<LemmaSuiteRow> rows;
    for (std::size_t d : cfg.lemma1_dims) {
        for (std::size_t i = 0; i < cfg.cases; ++i) {
            RngStream rng(cfg.seed,
                          "lemma1/d" + std::to_string(d) + "/case" + std::to_string(i));
            Matrix a = random_hermitian(d, rng);
            Matrix b = random_hermitian(d, rng);
            rows.push_back({1, d, i, lemma1_check(a, b, cfg.samples, rng)});
        }
    }
    for (std::size_t d : cfg.lemma2_dims) {
        for (std::size_t i = 0; i < cfg.cases; ++i) {
            RngStream rng(cfg.seed,
                          "lemma2/d" + std::to_string(d) + "/case" + std::to_string(i));
            Matrix a = random_hermitian(d, rng);
            Matrix b = random_hermitian(d, rng);
            Matrix c = random_hermitian(d, rng);
            Matrix e = random_hermitian(d, rng);
            rows.push_back({2, d, i, lemma2_check(a, b, c, e, cfg.samples, rng)});
        }
    }
    return rows;
}

}  // namespace expressibench
