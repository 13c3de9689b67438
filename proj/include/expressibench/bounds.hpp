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
 * @file Cost-function statistics and the expressivity bounds on them.
 *
 * For C = Tr[O U rho U^dagger] over an ensemble of U:
 *
 *   |E[C] - Tr[O]/d| <= ||O||_2 ||A_1||_2
 *
 *   Var[C] <= |beta| + ||O||_2^2 ||A_2||_2 + |alpha| ||O||_2 ||A_1||_2
 *             + ||O||_2^2 ||A_1||_2^2
 *
 *   beta  = (Tr[O]^2 + Tr[O^2]) / (d^2 - 1) * (1 - 1/d) - Tr[O]^2 / d^2
 *   alpha = 2 Tr[O] / d
 *
 * beta is the Haar variance of C, so the variance bound is tight when both
 * expressivity norms vanish.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "expressibench/config.hpp"
#include "expressibench/expressivity.hpp"
#include "expressibench/statevec.hpp"

namespace expressibench {

struct CostStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double std_err_mean = 0.0;
    double std_err_variance = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> samples;
};

/// Summary statistics of cost samples (at least 2).
inline CostStats cost_stats_from_samples(std::vector<double> samples) {
    const std::size_t m = samples.size();
    if (m < 2) {
        throw ValidationError("need at least 2 cost samples, got " + std::to_string(m));
    }
    CostStats s;
    s.count = m;
    const double md = static_cast<double>(m);
    double sum = 0.0;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (double c : samples) {
        sum += c;
        s.min = std::min(s.min, c);
        s.max = std::max(s.max, c);
    }
    s.mean = sum / md;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double c : samples) {
        double dev = c - s.mean;
        double dev2 = dev * dev;
        m2 += dev2;
        m4 += dev2 * dev2;
    }
    s.variance = m2 / (md - 1.0);
    s.std_err_mean = std::sqrt(s.variance / md);
    // Var of the sample variance: (mu4 - (m-3)/(m-1) sigma^4) / m.
    double mu4 = m4 / md;
    double var_of_var = (mu4 - (md - 3.0) / (md - 1.0) * s.variance * s.variance) / md;
    s.std_err_variance = std::sqrt(std::max(0.0, var_of_var));
    s.samples = std::move(samples);
    return s;
}

/// C_k = <psi_k|O|psi_k> over m draws from source.
template <StateSource Source>
CostStats cost_stats(const Source &source, const Observable &obs, std::size_t m,
                     RngStream &rng) {
    if (m < 2) {
        throw ValidationError("need at least 2 cost samples, got " + std::to_string(m));
    }
    std::vector<double> values;
    values.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        values.push_back(obs.expectation(source(rng)));
    }
    return cost_stats_from_samples(std::move(values));
}

inline CostStats cost_stats(const CircuitSpec &spec, const Observable &obs, std::size_t m,
                            const StateVector &initial, RngStream &rng) {
    if (obs.dim() != spec.dim()) {
        throw DimensionError("observable dimension does not match circuit");
    }
    return cost_stats(CircuitSource(spec, initial), obs, m, rng);
}

inline double beta_const(const Observable &obs, std::size_t d) {
    if (d < 2) {
        throw DimensionError("dimension must be >= 2");
    }
    const double dd = static_cast<double>(d);
    const double tr = obs.trace();
    const double tr2 = obs.trace_of_square();
    return (tr * tr + tr2) / (dd * dd - 1.0) * (1.0 - 1.0 / dd) - tr * tr / (dd * dd);
}

inline double alpha_const(const Observable &obs, std::size_t d) {
    if (d < 2) {
        throw DimensionError("dimension must be >= 2");
    }
    return 2.0 * obs.trace() / static_cast<double>(d);
}

struct TheoremOneReport {
    double lhs = 0.0;  // |E[C] - Tr[O]/d|
    double rhs = 0.0;  // ||O||_2 ||A_1||_2
    double margin = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

struct TheoremTwoReport {
    double beta = 0.0;
    double alpha = 0.0;
    double rhs = 0.0;
    double var_emp = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

inline TheoremOneReport theorem1_report(const CostStats &stats, const ExprEstimate &expr1,
                                        const Observable &obs, std::size_t d) {
    if (expr1.t != 1) {
        throw ValidationError("the concentration bound needs the t=1 expressivity estimate");
    }
    TheoremOneReport r;
    const double onorm = obs.frobenius_norm();
    r.lhs = std::abs(stats.mean - obs.trace() / static_cast<double>(d));
    r.rhs = onorm * expr1.norm_value;
    r.margin = r.rhs - r.lhs;
    r.tolerance = kTol.theorem_sigmas * (stats.std_err_mean + onorm * expr1.norm_std_err);
    r.holds = r.lhs <= r.rhs + r.tolerance;
    return r;
}

inline TheoremTwoReport theorem2_report(const CostStats &stats, const ExprEstimate &expr1,
                                        const ExprEstimate &expr2, const Observable &obs,
                                        std::size_t d) {
    if (expr1.t != 1 || expr2.t != 2) {
        throw ValidationError("the variance bound needs the t=1 and t=2 expressivity estimates");
    }
    TheoremTwoReport r;
    const double onorm = obs.frobenius_norm();
    const double onorm2 = onorm * onorm;
    const double n1 = expr1.norm_value;
    const double se1 = expr1.norm_std_err;
    r.beta = beta_const(obs, d);
    r.alpha = alpha_const(obs, d);
    r.var_emp = stats.variance;
    r.rhs = std::abs(r.beta) + onorm2 * expr2.norm_value + std::abs(r.alpha) * onorm * n1 +
            onorm2 * n1 * n1;
    r.margin = r.rhs - r.var_emp;
    // (n1 + se1)^2 - n1^2 bounds the error of the quadratic term.
    double rhs_err = onorm2 * expr2.norm_std_err + std::abs(r.alpha) * onorm * se1 +
                     onorm2 * (2.0 * n1 * se1 + se1 * se1);
    r.tolerance = kTol.theorem_sigmas * (stats.std_err_variance + rhs_err);
    r.holds = r.var_emp <= r.rhs + r.tolerance;
    return r;
}

/// min(1, variance / delta^2).
inline double chebyshev_bound(double variance, double delta) {
    if (!(delta > 0.0)) {
        throw DomainError("Chebyshev delta must be positive");
    }
    if (variance < 0.0) {
        throw DomainError("variance must be non-negative");
    }
    return std::min(1.0, variance / (delta * delta));
}

/// Fraction of samples with |C_k - mean| >= delta.
inline double empirical_deviation_prob(std::span<const double> samples, double mean,
                                       double delta) {
    if (!(delta > 0.0)) {
        throw DomainError("deviation delta must be positive");
    }
    if (samples.empty()) {
        throw ValidationError("no cost samples");
    }
    std::size_t hits = 0;
    for (double c : samples) {
        if (std::abs(c - mean) >= delta) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

inline double empirical_deviation_prob(const CostStats &stats, double delta) {
    return empirical_deviation_prob(stats.samples, stats.mean, delta);
}

/// sqrt(p (1 - p) / m).
inline double binomial_std_err(double p, std::size_t m) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(m));
}

}  // namespace expressibench
