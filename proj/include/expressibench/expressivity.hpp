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
 * @file Expressivity of circuit ensembles.
 *
 * For an ensemble of output states psi the order-t deviation from the Haar
 * moment operator is
 *
 *   A_t = P_sym / D_sym - E[(|psi><psi|)^{(x)t}],
 *
 * with P_sym the projector onto the symmetric subspace of (C^d)^{(x)t} and
 * D_sym = binomial(d + t - 1, t). Its Frobenius norm satisfies
 * ||A_t||^2 = E[F^t] - 1/D_sym where F = |<psi|phi>|^2 for independent
 * draws psi, phi. The sampling estimator uses that identity; the exact
 * oracle builds both operators and takes the norm of their difference.
 */
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expressibench/circuit_zoo.hpp"
#include "expressibench/config.hpp"
#include "expressibench/rng.hpp"
#include "expressibench/statevec.hpp"

namespace expressibench {

/// Anything that draws one ensemble member's output state from a stream.
template <typename S>
concept StateSource = requires(const S &s, RngStream &rng) {
    { s(rng) } -> std::same_as<StateVector>;
};

/// U(theta)|initial> with theta drawn by sample_params.
class CircuitSource {
  public:
    CircuitSource(const CircuitSpec &spec, StateVector initial)
        : circuit_(std::make_shared<const CompiledCircuit>(spec)), initial_(std::move(initial)) {
        if (initial_.num_qubits() != spec.num_qubits) {
            throw ValidationError("initial state does not match circuit width");
        }
    }

    StateVector operator()(RngStream &rng) const {
        return circuit_->run(sample_params(circuit_->spec(), rng), initial_);
    }

    std::size_t num_qubits() const { return initial_.num_qubits(); }
    const CircuitSpec &spec() const { return circuit_->spec(); }

  private:
    std::shared_ptr<const CompiledCircuit> circuit_;
    StateVector initial_;
};

/// Degenerate ensemble: every draw runs the circuit at the same fixed angles.
class FixedCircuitSource {
  public:
    FixedCircuitSource(const CircuitSpec &spec, ParamVector params, const StateVector &initial)
        : output_(run_circuit(spec, params, initial)) {}

    StateVector operator()(RngStream &) const { return output_; }
    std::size_t num_qubits() const { return output_.num_qubits(); }

  private:
    StateVector output_;
};

/// Haar-random states; the maximally expressive reference ensemble.
class HaarSource {
  public:
    explicit HaarSource(std::size_t num_qubits) : num_qubits_(num_qubits) {
        StateVector::zero(num_qubits);  // cap check
    }

    StateVector operator()(RngStream &rng) const { return haar_state(num_qubits_, rng); }
    std::size_t num_qubits() const { return num_qubits_; }

  private:
    std::size_t num_qubits_;
};

/// binomial(d + t - 1, t) for t in {1, 2}.
inline std::size_t sym_dim(std::size_t d, int t) {
    if (d < 2) {
        throw DimensionError("dimension must be >= 2");
    }
    if (t == 1) {
        return d;
    }
    if (t == 2) {
        return d * (d + 1) / 2;
    }
    throw ValidationError("moment order must be 1 or 2, got " + std::to_string(t));
}

/// Running sums of F, F^2, F^3, F^4 over independent pairs.
struct FidelitySamples {
    std::size_t count = 0;
    double sum_f = 0.0;
    double sum_f2 = 0.0;
    double sum_f3 = 0.0;
    double sum_f4 = 0.0;

    void add(double f) {
        ++count;
        double f2 = f * f;
        sum_f += f;
        sum_f2 += f2;
        sum_f3 += f2 * f;
        sum_f4 += f2 * f2;
    }

    /// Appends other's sums; merge order must be fixed for reproducible totals.
    void merge(const FidelitySamples &other) {
        count += other.count;
        sum_f += other.sum_f;
        sum_f2 += other.sum_f2;
        sum_f3 += other.sum_f3;
        sum_f4 += other.sum_f4;
    }

    /// Sample mean of F^t.
    double moment(int t) const {
        check_order(t);
        return (t == 1 ? sum_f : sum_f2) / static_cast<double>(count);
    }

    /// Standard error of moment(t) from the unbiased sample variance of F^t.
    double std_err(int t) const {
        check_order(t);
        if (count < 2) {
            return 0.0;
        }
        const double m = static_cast<double>(count);
        double mean = moment(t);
        double second = (t == 1 ? sum_f2 : sum_f4) / m;
        double var = std::max(0.0, (second - mean * mean) * m / (m - 1.0));
        return std::sqrt(var / m);
    }

  private:
    static void check_order(int t) {
        if (t != 1 && t != 2) {
            throw ValidationError("moment order must be 1 or 2, got " + std::to_string(t));
        }
    }
};

namespace detail {

template <StateSource Source, typename Visit>
FidelitySamples sample_pairs(const Source &source, std::size_t pairs, RngStream &rng,
                             Visit &&visit) {
    if (pairs < 2) {
        throw ValidationError("need at least 2 fidelity pairs, got " + std::to_string(pairs));
    }
    FidelitySamples acc;
    for (std::size_t k = 0; k < pairs; ++k) {
        StateVector a = source(rng);
        StateVector b = source(rng);
        acc.add(fidelity(a, b));
        visit(std::move(a), std::move(b));
    }
    return acc;
}

}  // namespace detail

/// F = |<psi_theta|psi_phi>|^2 over `pairs` independent (theta, phi) draws.
template <StateSource Source>
FidelitySamples sample_fidelities(const Source &source, std::size_t pairs, RngStream &rng) {
    return detail::sample_pairs(source, pairs, rng, [](StateVector &&, StateVector &&) {});
}

inline FidelitySamples sample_fidelities(const CircuitSpec &spec, std::size_t pairs,
                                         const StateVector &initial, RngStream &rng) {
    return sample_fidelities(CircuitSource(spec, initial), pairs, rng);
}

/// Same draws as sample_fidelities, also returning the 2*pairs states in draw order.
template <StateSource Source>
std::pair<FidelitySamples, std::vector<StateVector>>
sample_fidelities_with_states(const Source &source, std::size_t pairs, RngStream &rng) {
    std::vector<StateVector> states;
    states.reserve(2 * pairs);
    auto acc = detail::sample_pairs(source, pairs, rng, [&](StateVector &&a, StateVector &&b) {
        states.push_back(std::move(a));
        states.push_back(std::move(b));
    });
    return {acc, std::move(states)};
}

struct ExprEstimate {
    int t = 1;
    double frame_potential = 0.0;  // E[F^t]
    double norm_value = 0.0;       // ||A_t||_2
    double std_err = 0.0;          // of frame_potential
    double norm_std_err = 0.0;     // propagated to norm_value
    bool clamped = false;
};

/**
 * ||A_t||_2 = sqrt(max(0, E[F^t] - 1/D_sym)).
 *
 * A negative argument (sampling noise below the Haar floor) is clipped to 0
 * and flagged. The norm's error is the delta-method value se/(2*norm),
 * capped by sqrt(se), which bounds sqrt(x + se) - sqrt(x) for every x >= 0
 * and stays finite at the floor.
 */
inline ExprEstimate expr_norm(const FidelitySamples &samples, int t, std::size_t d) {
    if (samples.count == 0) {
        throw ValidationError("no fidelity samples");
    }
    ExprEstimate e;
    e.t = t;
    e.frame_potential = samples.moment(t);
    e.std_err = samples.std_err(t);
    double arg = e.frame_potential - 1.0 / static_cast<double>(sym_dim(d, t));
    e.clamped = arg < 0.0;
    e.norm_value = std::sqrt(std::max(0.0, arg));
    double cap = std::sqrt(e.std_err);
    e.norm_std_err = e.norm_value > 0.0 ? std::min(e.std_err / (2.0 * e.norm_value), cap) : cap;
    return e;
}

namespace detail {

inline Eigen::VectorXcd tensor_power(const StateVector &psi, int t) {
    Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(),
                                         static_cast<Eigen::Index>(psi.dim()));
    if (t == 1) {
        return v;
    }
    Eigen::VectorXcd out(v.size() * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.segment(i * v.size(), v.size()) = v(i) * v;
    }
    return out;
}

inline void check_oracle_dim(std::size_t d, int t) {
    sym_dim(d, t);
    std::size_t full = t == 1 ? d : d * d;
    if (full > kTol.max_oracle_dim) {
        throw DimensionError("moment operator dimension " + std::to_string(full) +
                             " exceeds cap " + std::to_string(kTol.max_oracle_dim));
    }
}

}  // namespace detail

/// (1/m) sum_k (|psi_k><psi_k|)^{(x)t} over the given states.
inline Matrix exact_moment_operator(std::span<const StateVector> states, int t) {
    if (states.empty()) {
        throw ValidationError("no states for moment operator");
    }
    const std::size_t d = states.front().dim();
    detail::check_oracle_dim(d, t);
    const auto full = static_cast<Eigen::Index>(t == 1 ? d : d * d);
    Matrix m = Matrix::Zero(full, full);
    for (const auto &psi : states) {
        if (psi.dim() != d) {
            throw DimensionError("states of mixed dimension");
        }
        Eigen::VectorXcd v = detail::tensor_power(psi, t);
        m.noalias() += v * v.adjoint();
    }
    m /= static_cast<double>(states.size());
    return m;
}

/// Moment operator over m fresh draws from source.
template <StateSource Source>
Matrix exact_moment_operator(const Source &source, int t, std::size_t m, RngStream &rng) {
    if (m < 1) {
        throw ValidationError("need at least one sample");
    }
    std::vector<StateVector> states;
    states.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        states.push_back(source(rng));
        if (k == 0) {
            detail::check_oracle_dim(states.front().dim(), t);
        }
    }
    return exact_moment_operator(std::span<const StateVector>(states), t);
}

inline Matrix exact_moment_operator(const CircuitSpec &spec, int t, std::size_t m,
                                    const StateVector &initial, RngStream &rng) {
    detail::check_oracle_dim(spec.dim(), t);
    return exact_moment_operator(CircuitSource(spec, initial), t, m, rng);
}

/// SWAP on C^d (x) C^d: |i>|j> -> |j>|i>.
inline Matrix swap_operator(std::size_t d) {
    const auto dd = static_cast<Eigen::Index>(d);
    Matrix s = Matrix::Zero(dd * dd, dd * dd);
    for (Eigen::Index i = 0; i < dd; ++i) {
        for (Eigen::Index j = 0; j < dd; ++j) {
            s(j * dd + i, i * dd + j) = 1.0;
        }
    }
    return s;
}

/// Projector onto the symmetric subspace: I for t=1, (I + SWAP)/2 for t=2.
inline Matrix sym_projector(std::size_t d, int t) {
    detail::check_oracle_dim(d, t);
    const auto dd = static_cast<Eigen::Index>(d);
    if (t == 1) {
        return Matrix::Identity(dd, dd);
    }
    return 0.5 * (Matrix::Identity(dd * dd, dd * dd) + swap_operator(d));
}

/// Haar average of (|psi><psi|)^{(x)t}: P_sym / D_sym.
inline Matrix haar_moment_operator(std::size_t d, int t) {
    return sym_projector(d, t) / static_cast<double>(sym_dim(d, t));
}

/// ||P_sym/D_sym - M||_2 with ||X||_2^2 = Tr[X^dagger X].
inline double exact_expr_norm(const Matrix &moment, std::size_t d, int t) {
    Matrix haar = haar_moment_operator(d, t);
    if (haar.rows() != moment.rows() || haar.cols() != moment.cols()) {
        throw DimensionError("moment operator shape does not match d^t");
    }
    return (haar - moment).norm();
}

}  // namespace expressibench
